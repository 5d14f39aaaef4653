#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>

#include "infothermo/cycle_laws.hpp"
#include "infothermo/error.hpp"
#include "infothermo/monte_carlo.hpp"
#include "infothermo/optimal.hpp"
#include "infothermo/paths.hpp"
#include "infothermo/sensory.hpp"
#include "infothermo/serialize.hpp"
#include "infothermo/state.hpp"

namespace infothermo::cli {

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

struct Common {
  std::string config;
  std::string format = "json";
  std::string output = "-";
  std::string plot_data;
  bool bits = false;
  std::uint64_t seed = 0;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_source(const std::string& name, std::istream& in) {
  if (name == "-") {
    return std::string(std::istreambuf_iterator<char>(in), {});
  }
  std::ifstream f(name);
  if (!f) throw Error(ErrorCode::invalid_argument, "cannot open '" + name + "'");
  return std::string(std::istreambuf_iterator<char>(f), {});
}

// Writes rows of numbers as a whitespace-separated table with a '#' header.
void write_plot(const std::string& file, const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
  if (file.empty()) return;
  std::ofstream f(file);
  if (!f) throw Error(ErrorCode::invalid_argument, "cannot write plot data to '" + file + "'");
  f << '#';
  for (const auto& c : columns) f << ' ' << c;
  f << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) f << (i ? " " : "") << fmt(r[i]);
    f << '\n';
  }
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number_float()) {
    out << prefix << ',' << fmt(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    out << prefix << ',' << j.get<std::string>() << '\n';
  } else {
    out << prefix << ',' << j.dump() << '\n';
  }
}

class Output {
 public:
  Output(const Common& c, std::ostream& fallback) : format_(c.format) {
    if (c.output != "-" && !c.output.empty()) {
      file_.open(c.output);
      if (!file_) throw Error(ErrorCode::invalid_argument, "cannot write '" + c.output + "'");
      stream_ = &file_;
    } else {
      stream_ = &fallback;
    }
  }
  std::ostream& stream() { return *stream_; }
  void emit(const json& report) {
    if (format_ == "csv") {
      *stream_ << "field,value\n";
      flatten(report, "", *stream_);
    } else {
      *stream_ << report.dump(2) << '\n';
    }
  }

 private:
  std::string format_;
  std::ofstream file_;
  std::ostream* stream_;
};

double info_unit(const Common& c) { return c.bits ? 1.0 / std::numbers::ln2 : 1.0; }

NoiseModel make_noise(double sigma_r2, const std::string& convention, double constant) {
  if (convention == "raw") return NoiseModel::raw(sigma_r2, constant);
  return NoiseModel::mutual_info(sigma_r2);
}

// ---------------------------------------------------------------- state

struct StateOpts {
  double m = 1.0;
  double sigma2 = 0.0;
  double sigma_r2 = 1.0;
  std::string convention = "mutual_info";
  double constant = 0.0;
  std::optional<double> estimator_variance;
};

int cmd_state(const StateOpts& o, const Common& c, Io io) {
  const NoiseModel noise = make_noise(o.sigma_r2, o.convention, o.constant);
  const InferenceState s{o.m, o.sigma2};
  s.validate();
  noise.validate();
  const double u = info_unit(c);
  json r;
  r["state"] = s;
  r["noise"] = noise;
  r["units"] = c.bits ? "bits" : "nats";
  const EntropyValue h = entropy_detail(s, noise);
  r["entropy"] = h.singular ? json(nullptr) : json(h.nats * u);
  r["theta"] = theta(s, noise);
  r["theta_floor"] = theta_floor(s.m, noise);
  r["efficiency"] = noise.sigma_r2 > 0.0 ? json(efficiency(s, noise)) : json(nullptr);
  const double th = theta(s, noise);
  r["mmse"] = th > 0.0 ? json(mmse(s, noise)) : json(nullptr);
  if (th > 0.0) {
    r["partials"] = partials(s, noise);
  }
  r["quasi_specific_heat"] = quasi_specific_heat();
  if (!h.singular) r["potentials"] = quasi_potentials(s, noise);
  if (o.estimator_variance) {
    r["theta_suboptimal"] = theta_suboptimal(*o.estimator_variance, s, noise);
  }
  Output(c, io.out).emit(r);
  return kPass;
}

// ----------------------------------------------------------------- path

struct PathOpts {
  std::string path_file;
  std::string process;
  double m = 1.0;
  double sigma2 = 1.0;
  double end = 2.0;
  int nodes = 2;
  double sigma_r2 = 1.0;
  int steps = 64;
};

ProcessPath load_or_build_path(const PathOpts& o, const NoiseModel& noise, std::istream& in) {
  if (!o.path_file.empty()) {
    return path_from_json(parse_json(read_source(o.path_file, in), o.path_file), "path");
  }
  if (o.process.empty()) {
    throw Error(ErrorCode::invalid_argument, "give --path FILE or --process KIND");
  }
  ProcessKind kind;
  if (o.process == "isochoric") kind = ProcessKind::isochoric;
  else if (o.process == "adiabatic") kind = ProcessKind::adiabatic;
  else if (o.process == "isothermal") kind = ProcessKind::isothermal;
  else throw Error(ErrorCode::invalid_argument, "unknown process '" + o.process + "'");
  return make_process(kind, {o.m, o.sigma2}, o.end, noise, o.nodes);
}

int cmd_path(const PathOpts& o, const Common& c, Io io) {
  const NoiseModel noise = NoiseModel::mutual_info(o.sigma_r2);
  const ProcessPath path = load_or_build_path(o, noise, io.in);
  const double u = info_unit(c);
  json r;
  r["units"] = c.bits ? "bits" : "nats";
  r["start"] = path.front();
  r["end"] = path.back();
  r["segments"] = path.segment_count();
  r["sampling_work"] = sampling_work(path);
  r["information_gain"] = information_gain(path, noise) * u;
  r["reversible_entropy_flux"] = reversible_entropy_flux(path, noise) * u;
  r["entropy_change"] = (entropy(path.back(), noise) - entropy(path.front(), noise)) * u;
  r["first_law_residual"] = first_law_residual(path, noise, o.steps);
  r["first_law_steps"] = o.steps;
  std::vector<std::vector<double>> rows;
  for (const auto& n : path.nodes()) rows.push_back({n.m, n.sigma2});
  write_plot(c.plot_data, {"m", "sigma2"}, rows);
  Output(c, io.out).emit(r);
  return kPass;
}

// ---------------------------------------------------------------- cycle

struct CycleOpts {
  std::string path_file;
  std::size_t random = 0;
  double sigma_r2 = 1.0;
  double tol = 1e-9;
};

int cmd_cycle(const CycleOpts& o, const Common& c, Io io) {
  const NoiseModel noise = NoiseModel::mutual_info(o.sigma_r2);
  std::vector<CyclePath> cycles;
  if (!o.path_file.empty()) {
    cycles.emplace_back(path_from_json(parse_json(read_source(o.path_file, io.in), o.path_file)));
  } else if (o.random > 0) {
    cycles = random_cycles(c.seed, o.random);
  } else {
    throw Error(ErrorCode::invalid_argument, "give --path FILE or --random N");
  }
  json list = json::array();
  bool ok = true;
  double worst = 0.0, max_work = 0.0;
  for (const auto& cyc : cycles) {
    const ClosureReport rep = cycle_closure_check(cyc, noise);
    const double closure =
        std::max({std::abs(rep.dh_loop), std::abs(rep.dsigma2_loop), std::abs(rep.dtheta_loop)});
    const double first_law = std::abs(rep.theta_dh_loop + rep.sampling_work);
    const bool pass = closure < o.tol && first_law <= 1e-8 * std::max(1.0, std::abs(rep.sampling_work));
    ok = ok && pass;
    worst = std::max(worst, closure);
    max_work = std::max(max_work, std::abs(rep.sampling_work));
    json entry = rep;
    entry["pass"] = pass;
    try {
      entry["efficiency_bound"] = global_efficiency_bound(cyc, noise);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::undefined_ratio) throw;
      entry["efficiency_bound"] = nullptr;
    }
    list.push_back(entry);
  }
  if (cycles.size() == 1) {
    std::vector<std::vector<double>> rows;
    for (const auto& n : cycles.front().path().nodes()) rows.push_back({n.m, n.sigma2});
    write_plot(c.plot_data, {"m", "sigma2"}, rows);
  }
  json r{{"n_cycles", cycles.size()},
         {"worst_closure", worst},
         {"max_abs_work", max_work},
         {"tolerance", o.tol},
         {"pass", ok},
         {"cycles", list}};
  Output(c, io.out).emit(r);
  return ok ? kPass : kFail;
}

// ------------------------------------------------------------- optimize

struct OptimizeOpts {
  double m_a = 1.0;
  double m_b = 4.0;
  double work = 1.0;
  double sigma_r2 = 1.0;
  int nodes = 61;
  bool dp = false;
  int dp_grid = 64;
  double dp_tol = 5e-3;
};

int cmd_optimize(const OptimizeOpts& o, const Common& c, Io io) {
  const BudgetProblem problem{o.m_a, o.m_b, o.work, NoiseModel::mutual_info(o.sigma_r2)};
  const OptimalTrajectory traj = solve_optimal(problem);
  if (o.nodes < 2) throw Error(ErrorCode::invalid_argument, "--nodes must be >= 2");
  const double u = info_unit(c);
  const double gain = optimal_info_gain(problem);
  const double bound = max_info_bound(o.m_a, o.m_b);

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < o.nodes; ++i) {
    const double m = i + 1 == o.nodes ? o.m_b : o.m_a + (o.m_b - o.m_a) * i / (o.nodes - 1);
    rows.push_back({m, traj.sigma2(m), traj.theta(m), traj.running_work(m),
                    traj.running_gain(m) * u});
  }
  const std::vector<std::string> columns{"m", "sigma2_opt", "theta", "running_work",
                                         "running_gain"};
  write_plot(c.plot_data, columns, rows);

  json r{{"problem", problem},
         {"units", c.bits ? "bits" : "nats"},
         {"coefficient", traj.coefficient},
         {"gain", gain * u},
         {"bound", bound * u},
         {"peak_m", traj.peak_m() ? json(*traj.peak_m()) : json(nullptr)}};
  bool ok = true;
  if (o.dp) {
    DpOptions opt;
    opt.m_grid_size = opt.sigma_grid_size = opt.budget_grid_size = o.dp_grid;
    const DpResult dp = dp_oracle(problem, opt);
    const double diff = gain - dp.best_gain;
    ok = std::abs(diff) <= o.dp_tol && dp.best_gain <= gain + 1e-9;
    r["oracle"] = {{"grid", o.dp_grid},
                   {"gain", dp.best_gain * u},
                   {"work_used", dp.work_used},
                   {"difference", diff * u},
                   {"tolerance", o.dp_tol * u},
                   {"pass", ok}};
  }

  Output sink(c, io.out);
  if (c.format == "csv") {
    std::ostream& s = sink.stream();
    s << "# gain " << fmt(gain * u) << "\n# bound " << fmt(bound * u) << '\n';
    if (o.dp) s << "# oracle_gain " << fmt(r["oracle"]["gain"].get<double>()) << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) s << (i ? "," : "") << columns[i];
    s << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << fmt(row[i]);
      s << '\n';
    }
  } else {
    json t = json::array();
    for (const auto& row : rows) {
      t.push_back({{"m", row[0]}, {"sigma2_opt", row[1]}, {"theta", row[2]},
                   {"running_work", row[3]}, {"running_gain", row[4]}});
    }
    r["trajectory"] = t;
    sink.emit(r);
  }
  return ok ? kPass : kFail;
}

// ------------------------------------------------------------ secondlaw

struct SecondLawOpts {
  std::string loop_file;
  std::string waveform = "trapezoid";
  std::string breakpoints;
  double low = 1.0;
  double high = 4.0;
  double rise = 1.0;
  double dwell_high = 5.0;
  double fall = 1.0;
  double dwell_low = 5.0;
  double rate = 1.0;
  double c = 1.0;
  double p = 2.0;
  double sigma_r2 = 1.0;
  double m_eq_scale = 1.0;
  std::optional<double> m_eq_exponent;
  std::optional<double> t_end;
  double dt = 1e-3;
};

// "t:mu,t:mu,..."
std::vector<std::pair<double, double>> parse_breakpoints(const std::string& spec) {
  std::vector<std::pair<double, double>> out;
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::istringstream ts(tok);
    double t = 0.0, mu = 0.0;
    char colon = 0;
    if (!(ts >> t >> colon >> mu) || colon != ':' || !(ts >> std::ws).eof()) {
      throw Error(ErrorCode::parse_error, "--breakpoints: expected t:mu, got '" + tok + "'");
    }
    out.emplace_back(t, mu);
  }
  return out;
}

int cmd_secondlaw(const SecondLawOpts& o, const Common& c, Io io) {
  const ConstitutiveScaling scaling{o.c, o.p};
  const NoiseModel noise = NoiseModel::mutual_info(o.sigma_r2);
  std::optional<StimulusLoop> loop;
  json r;
  if (!o.loop_file.empty()) {
    loop = loop_from_json(parse_json(read_source(o.loop_file, io.in), o.loop_file));
  } else {
    std::optional<Waveform> w;
    if (!o.breakpoints.empty()) {
      w = Waveform(parse_breakpoints(o.breakpoints));
    } else if (o.waveform == "trapezoid") {
      w = Waveform::trapezoid(o.low, o.high, o.rise, o.dwell_high, o.fall, o.dwell_low);
    } else if (o.waveform == "square") {
      w = Waveform::square(o.low, o.high, o.dwell_high, o.dwell_low);
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown waveform '" + o.waveform + "'");
    }
    SamplingDynamics dyn;
    dyn.rate = o.rate;
    dyn.m_eq_scale = o.m_eq_scale;
    dyn.m_eq_exponent = o.m_eq_exponent;
    const double T = w->period();
    const double t_end =
        o.t_end.value_or(T * std::max(2.0, std::ceil(25.0 / (o.rate * T)) + 1.0));
    loop = simulate_driven_cycle(*w, dyn, scaling, t_end, o.dt);
    r["t_end"] = t_end;
    r["period"] = T;
  }
  const SecondLawVerdict v = second_law_check(*loop, scaling, noise);
  r["verdict"] = v;
  r["loop_points"] = loop->points().size();
  r["loop_area"] = loop->signed_area();
  std::vector<std::vector<double>> rows;
  for (const auto& p : loop->points()) rows.push_back({p.mu, p.m});
  write_plot(c.plot_data, {"mu", "m"}, rows);
  Output(c, io.out).emit(r);
  return v.holds ? kPass : kFail;
}

// ---------------------------------------------------------------- adapt

struct AdaptOpts {
  AdaptationParams params{2.0, 1.0, 2.0, 1.0, 1.0};
  std::string params_json;
  double stimulus = 3.0;
  std::string t_grid;
  std::string triples;
  std::size_t emit_synthetic = 0;
  double tol = 1e-9;
};

std::vector<double> parse_grid(const std::string& spec) {
  // "t0:t1:n" evenly spaced, or a comma list.
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a = 0, b = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2) {
      throw Error(ErrorCode::parse_error, "--t-grid: expected t0:t1:n with n >= 2");
    }
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, "--t-grid: '" + tok + "' is not a number");
    }
  }
  return out;
}

int cmd_adapt(const AdaptOpts& o, const Common& c, Io io) {
  if (o.emit_synthetic > 0) {
    Output sink(c, io.out);
    const auto triples = synthetic_triples(c.seed, o.emit_synthetic);
    write_triples_csv(sink.stream(), triples);
    return kPass;
  }
  AdaptationParams params = o.params;
  if (!o.params_json.empty()) params = params_from_json(parse_json(o.params_json, "--params"));
  params.validate();

  const FixedPoints fp = fixed_points(o.stimulus, params);
  const double balance = cycle_balance(o.stimulus, params);
  const InequalityVerdict model = universal_inequality_check({"model", fp.sr, fp.pr, fp.ss}, o.tol);
  bool ok = model.holds() && balance >= -1e-12;

  json r{{"params", params},
         {"stimulus", o.stimulus},
         {"fixed_points", fp},
         {"cycle_balance", balance},
         {"model_inequality", model}};

  if (!o.t_grid.empty()) {
    json grid = json::array();
    std::vector<std::vector<double>> rows;
    for (double t : parse_grid(o.t_grid)) {
      const double f = firing_rate(o.stimulus, t, params);
      grid.push_back({{"t", t}, {"m", m_of_t(t, o.stimulus, params)}, {"rate", f}});
      rows.push_back({t, m_of_t(t, o.stimulus, params), f});
    }
    r["response"] = grid;
    write_plot(c.plot_data, {"t", "m", "rate"}, rows);
  }

  if (!o.triples.empty()) {
    std::istringstream src(read_source(o.triples, io.in));
    const CorpusReport rep = verify_corpus(ingest_triples(src), o.tol);
    r["corpus"] = rep;
    r["corpus"].erase("rows");
    ok = ok && rep.all_pass();
  }
  r["pass"] = ok;
  Output(c, io.out).emit(r);
  return ok ? kPass : kFail;
}

// ------------------------------------------------------------- validate

struct ValidateOpts {
  std::string family = "gaussian";
  double mu = 0.0;
  double sigma2 = 1.0;
  std::int64_t m = 100;
  double sigma_r2 = 0.5;
  std::size_t trials = 10000;
  unsigned workers = 0;
  std::string method = "gaussian_moment";
  double tol = 0.0;
  std::vector<std::int64_t> m_list;
  bool normality = false;
  std::string dump_ensemble;
};

int cmd_validate(const ValidateOpts& o, const Common& c, Io io) {
  SamplingSpec spec;
  if (o.family == "gaussian") spec = SamplingSpec::gaussian(o.mu, o.sigma2, o.m, o.sigma_r2);
  else if (o.family == "poisson") spec = SamplingSpec::poisson(o.mu, o.m, o.sigma_r2);
  else throw Error(ErrorCode::invalid_argument, "unknown family '" + o.family + "'");
  spec.trials = o.trials;
  spec.seed = c.seed;
  spec.workers = o.workers;

  EntropyValidationOptions vo;
  vo.tolerance = o.tol;
  if (o.method == "nearest_neighbor") vo.method = EntropyMethod::nearest_neighbor;
  else if (o.method != "gaussian_moment") {
    throw Error(ErrorCode::invalid_argument, "unknown method '" + o.method + "'");
  }

  bool ok = true;
  json r{{"spec", spec}};
  if (spec.sigma_r2 > 0.0 || spec.family == Family::gaussian) {
    const NoiseModel noise = spec.sigma_r2 > 0.0 ? NoiseModel::mutual_info(spec.sigma_r2)
                                                 : NoiseModel::raw(0.0, 0.0);
    const EntropyValidation v = validate_entropy_formula(spec, noise, vo);
    r["entropy"] = v;
    r["entropy"]["convention"] = noise.convention == EntropyConvention::mutual_info ? "mutual_info" : "raw";
    if (v.pass) ok = ok && *v.pass;
  }
  if (!o.m_list.empty()) {
    const VarianceScaling vs = validate_variance_scaling(spec, o.m_list);
    r["variance_scaling"] = vs;
    if (vs.pass) ok = ok && *vs.pass;
  }
  if (o.normality || !o.dump_ensemble.empty()) {
    const auto ens = simulate_estimator(spec);
    if (o.normality) {
      const Normality n = normality_check(ens);
      r["normality"] = n;
      ok = ok && n.pass;
    }
    if (!o.dump_ensemble.empty()) {
      std::ofstream f(o.dump_ensemble);
      if (!f) throw Error(ErrorCode::invalid_argument, "cannot write '" + o.dump_ensemble + "'");
      write_ensemble_csv(f, ens);
    }
  }
  r["pass"] = ok;
  Output(c, io.out).emit(r);
  return ok ? kPass : kFail;
}

// --------------------------------------------------------------- config

std::string option_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

bool numeric_option(const CLI::Option* opt) {
  const std::string t = opt->get_type_name();
  return t == "FLOAT" || t == "INT" || t == "UINT";
}

void append_config(const json& obj, const std::string& where, CLI::App& app, CLI::App& sub,
                   std::vector<std::string>& tokens) {
  if (!obj.is_object()) throw Error(ErrorCode::parse_error, where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string at = where + "." + key;
    if (key == sub.get_name() && value.is_object()) {
      append_config(value, at, app, sub, tokens);
      continue;
    }
    if (app.get_subcommand_no_throw(key) != nullptr) continue;  // another command's block
    if (key == "config") throw Error(ErrorCode::parse_error, at + ": nested config not allowed");
    const std::string name = option_name(key);
    const CLI::Option* opt = sub.get_option_no_throw(name);
    if (opt == nullptr) opt = app.get_option_no_throw(name);
    if (opt == nullptr) {
      throw Error(ErrorCode::parse_error, at + ": unknown field for '" + sub.get_name() + "'");
    }
    auto scalar = [&](const json& v, const std::string& vat) {
      if (numeric_option(opt) && !v.is_number()) {
        throw Error(ErrorCode::parse_error, vat + ": expected a number, got " + v.type_name());
      }
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number()) return v.dump();
      throw Error(ErrorCode::parse_error, vat + ": expected a number or string, got " + v.type_name());
    };
    if (value.is_null()) continue;
    if (opt->get_type_size() == 0) {
      if (!value.is_boolean()) throw Error(ErrorCode::parse_error, at + ": expected true or false");
      if (value.get<bool>()) tokens.push_back(name);
      continue;
    }
    if (value.is_object() && key == "params") {
      tokens.push_back(name);
      tokens.push_back(value.dump());
      continue;
    }
    if (key == "breakpoints" && value.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < value.size(); ++i) {
        const json& bp = value[i];
        const std::string bat = at + "[" + std::to_string(i) + "]";
        if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number() || !bp[1].is_number()) {
          throw Error(ErrorCode::parse_error, bat + ": expected [t, mu]");
        }
        joined += (i ? "," : "") + bp[0].dump() + ":" + bp[1].dump();
      }
      tokens.push_back(name);
      tokens.push_back(joined);
      continue;
    }
    if (value.is_array()) {
      if (value.empty()) continue;
      tokens.push_back(name);
      for (std::size_t i = 0; i < value.size(); ++i) {
        tokens.push_back(scalar(value[i], at + "[" + std::to_string(i) + "]"));
      }
      continue;
    }
    tokens.push_back(name);
    tokens.push_back(scalar(value, at));
  }
}

std::optional<std::string> find_config_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Thermodynamic state functions, paths, cycles and checks for asymptotic inference",
               "infothermo"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  if (const char* env = std::getenv("INFOTHERMO_SEED")) {
    try {
      common.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: INFOTHERMO_SEED is not an unsigned integer: '" << env << "'\n";
      return kError;
    }
  }
  app.add_option("--config", common.config, "JSON file of option values; flags override it");
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--output", common.output, "Output file ('-' for stdout)");
  app.add_option("--plot-data", common.plot_data, "Write a whitespace table for gnuplot");
  app.add_flag("--bits", common.bits, "Report entropy and information in bits");
  app.add_option("--seed", common.seed, "Random seed (default from INFOTHERMO_SEED)");

  std::function<int()> action;
  Io io{in, out, err};

  StateOpts st;
  auto* s = app.add_subcommand("state", "State functions at one point (m, sigma2)");
  s->add_option("--m", st.m, "Effective sample size")->required();
  s->add_option("--sigma2", st.sigma2, "Per-observation variance")->required();
  s->add_option("--sigma-r2", st.sigma_r2, "Representation-noise variance");
  s->add_option("--convention", st.convention)->check(CLI::IsMember({"mutual_info", "raw"}));
  s->add_option("--constant", st.constant, "Additive constant for the raw convention");
  s->add_option("--estimator-variance", st.estimator_variance, "Variance of a suboptimal estimator");
  s->callback([&] { action = [&] { return cmd_state(st, common, io); }; });

  PathOpts pa;
  auto* p = app.add_subcommand("path", "Work, information and first-law residual along a path");
  p->add_option("--path", pa.path_file, "JSON path file ('-' for stdin)");
  p->add_option("--process", pa.process)->check(CLI::IsMember({"isochoric", "adiabatic", "isothermal"}));
  p->add_option("--m", pa.m, "Start m for --process");
  p->add_option("--sigma2", pa.sigma2, "Start sigma2 for --process");
  p->add_option("--end", pa.end, "Final m (final sigma2 for isochoric)");
  p->add_option("--nodes", pa.nodes);
  p->add_option("--sigma-r2", pa.sigma_r2);
  p->add_option("--steps", pa.steps, "Steps per segment for the first-law residual");
  p->callback([&] { action = [&] { return cmd_path(pa, common, io); }; });

  CycleOpts cy;
  auto* c = app.add_subcommand("cycle", "Closure of state functions around cycles");
  c->add_option("--path", cy.path_file, "JSON closed path ('-' for stdin)");
  c->add_option("--random", cy.random, "Check N seeded random cycles");
  c->add_option("--sigma-r2", cy.sigma_r2);
  c->add_option("--tol", cy.tol, "Closure tolerance");
  c->callback([&] { action = [&] { return cmd_cycle(cy, common, io); }; });

  OptimizeOpts op;
  auto* o = app.add_subcommand("optimize", "Optimal variance trajectory under a work budget");
  o->add_option("--m-a", op.m_a);
  o->add_option("--m-b", op.m_b);
  o->add_option("--work", op.work, "Sampling-work budget");
  o->add_option("--sigma-r2", op.sigma_r2);
  o->add_option("--nodes", op.nodes, "Trajectory samples");
  o->add_flag("--dp", op.dp, "Compare with the dynamic-programming oracle");
  o->add_option("--dp-grid", op.dp_grid);
  o->add_option("--dp-tol", op.dp_tol);
  o->callback([&] { action = [&] { return cmd_optimize(op, common, io); }; });

  SecondLawOpts sl;
  auto* w = app.add_subcommand("secondlaw", "Cyclic information of a driven or given loop");
  w->add_option("--loop", sl.loop_file, "JSON loop file ('-' for stdin)");
  w->add_option("--breakpoints", sl.breakpoints, "Piecewise-linear stimulus t:mu,t:mu,...");
  w->add_option("--waveform", sl.waveform)->check(CLI::IsMember({"trapezoid", "square"}));
  w->add_option("--low", sl.low);
  w->add_option("--high", sl.high);
  w->add_option("--rise", sl.rise);
  w->add_option("--dwell-high", sl.dwell_high);
  w->add_option("--fall", sl.fall);
  w->add_option("--dwell-low", sl.dwell_low);
  w->add_option("--rate", sl.rate, "Relaxation rate a");
  w->add_option("--c", sl.c, "Scaling prefactor");
  w->add_option("--p", sl.p, "Scaling exponent");
  w->add_option("--sigma-r2", sl.sigma_r2);
  w->add_option("--m-eq-scale", sl.m_eq_scale);
  w->add_option("--m-eq-exponent", sl.m_eq_exponent);
  w->add_option("--t-end", sl.t_end);
  w->add_option("--dt", sl.dt);
  w->callback([&] { action = [&] { return cmd_secondlaw(sl, common, io); }; });

  AdaptOpts ad;
  auto* a = app.add_subcommand("adapt", "Sensory adaptation model and triple verification");
  a->add_option("--params", ad.params_json, R"(JSON {"k","beta","p","delta_i","a"})");
  a->add_option("--k", ad.params.k);
  a->add_option("--beta", ad.params.beta);
  a->add_option("--p", ad.params.p);
  a->add_option("--delta-i", ad.params.delta_i);
  a->add_option("--a", ad.params.a);
  a->add_option("--stimulus", ad.stimulus, "Stimulus intensity I");
  a->add_option("--t-grid", ad.t_grid, "t0:t1:n or comma list");
  a->add_option("--triples", ad.triples, "CSV unit_id,sr,pr,ss ('-' for stdin)");
  a->add_option("--emit-synthetic", ad.emit_synthetic, "Write N model-generated triples as CSV");
  a->add_option("--tol", ad.tol);
  a->callback([&] { action = [&] { return cmd_adapt(ad, common, io); }; });

  ValidateOpts va;
  auto* v = app.add_subcommand("validate", "Monte Carlo check of the entropy formula");
  v->add_option("--family", va.family)->check(CLI::IsMember({"gaussian", "poisson"}));
  v->add_option("--mu", va.mu);
  v->add_option("--sigma2", va.sigma2);
  v->add_option("--m", va.m);
  v->add_option("--sigma-r2", va.sigma_r2);
  v->add_option("--trials", va.trials);
  v->add_option("--workers", va.workers);
  v->add_option("--method", va.method)->check(CLI::IsMember({"gaussian_moment", "nearest_neighbor"}));
  v->add_option("--tol", va.tol);
  v->add_option("--m-list", va.m_list, "m values for the variance-scaling check")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  v->add_flag("--normality", va.normality);
  v->add_option("--dump-ensemble", va.dump_ensemble, "CSV file for the ensemble");
  v->callback([&] { action = [&] { return cmd_validate(va, common, io); }; });

  try {
    std::vector<std::string> argv = args;
    if (const auto cfg_file = find_config_arg(args)) {
      const json cfg = parse_json(read_source(*cfg_file, in), *cfg_file);
      auto pos = std::find_if(argv.begin(), argv.end(), [&](const std::string& t) {
        return app.get_subcommand_no_throw(t) != nullptr;
      });
      if (pos == argv.end()) throw Error(ErrorCode::invalid_argument, "no subcommand given");
      std::vector<std::string> tokens;
      append_config(cfg, "config", app, *app.get_subcommand(*pos), tokens);
      argv.insert(pos + 1, tokens.begin(), tokens.end());
    }
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }

  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace infothermo::cli
