#include "infothermo/serialize.hpp"

#include <cmath>

#include "infothermo/error.hpp"

namespace infothermo {

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

const json& field(const json& j, std::string_view key, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::parse_error, where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::parse_error, where + "." + std::string(key) + ": missing field");
  }
  return *it;
}

const json& array_of(const json& j, std::string_view key, const std::string& where,
                     std::string& path_out) {
  if (j.is_array()) {
    path_out = where;
    return j;
  }
  if (j.is_object() && j.contains(key)) {
    path_out = where + "." + std::string(key);
    const json& a = j.at(std::string(key));
    if (a.is_array()) return a;
  }
  throw Error(ErrorCode::parse_error,
              where + ": expected an array or an object with '" + std::string(key) + "'");
}

}  // namespace

double number_at(const json& j, std::string_view key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) {
    throw Error(ErrorCode::parse_error,
                where + "." + std::string(key) + ": expected a number, got " + v.type_name());
  }
  return v.get<double>();
}

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string(source) + ": " + e.what());
  }
}

void to_json(json& j, const NoiseModel& n) {
  j = json{{"sigma_r2", n.sigma_r2},
           {"convention", n.convention == EntropyConvention::mutual_info ? "mutual_info" : "raw"}};
  if (n.convention == EntropyConvention::raw) j["constant"] = n.raw_constant;
}

void to_json(json& j, const InferenceState& s) { j = json{{"m", s.m}, {"sigma2", s.sigma2}}; }

void to_json(json& j, const Partials& p) {
  j = json{{"dh_dsigma2_at_m", p.dh_dsigma2_at_m},
           {"dh_dm_at_sigma2", p.dh_dm_at_sigma2},
           {"dsigma2_dm_at_h", p.dsigma2_dm_at_h},
           {"dtheta_dm_at_h", p.dtheta_dm_at_h}};
}

void to_json(json& j, const QuasiPotentials& q) {
  j = json{{"helmholtz", q.helmholtz}, {"gibbs", q.gibbs}};
}

void to_json(json& j, const ClosureReport& r) {
  j = json{{"dh_loop", r.dh_loop},
           {"dsigma2_loop", r.dsigma2_loop},
           {"dtheta_loop", r.dtheta_loop},
           {"theta_dh_loop", r.theta_dh_loop},
           {"sampling_work", r.sampling_work},
           {"information_gain", r.information_gain},
           {"signed_area", r.signed_area}};
}

void to_json(json& j, const LoopPoint& p) { j = json{{"mu", p.mu}, {"m", p.m}}; }

void to_json(json& j, const ProcessPath& path) {
  j = json::array();
  for (const auto& n : path.nodes()) j.push_back(n);
}

void to_json(json& j, const StimulusLoop& loop) {
  j = json::array();
  for (const auto& p : loop.points()) j.push_back(p);
}

void to_json(json& j, const BudgetProblem& b) {
  j = json{{"m_a", b.m_a}, {"m_b", b.m_b}, {"work_budget", b.work_budget}, {"noise", b.noise}};
}

void to_json(json& j, const EfficiencyBound& e) {
  j = json{{"ratio", e.ratio},           {"bound", e.bound},
           {"min_m", e.min_m},           {"information", e.information},
           {"work", e.work},             {"sign_definite", e.sign_definite},
           {"holds", e.holds}};
}

void to_json(json& j, const CyclicInformation& c) {
  j = json{{"line_integral", c.line_integral},
           {"area_integral", optional_json(c.area_integral)},
           {"simple", c.simple}};
}

void to_json(json& j, const SecondLawVerdict& v) {
  j = json{{"orientation", v.orientation},
           {"cyclic_info", v.cyclic_info},
           {"area_integral", optional_json(v.area_integral)},
           {"reversed", v.reversed},
           {"holds", v.holds},
           {"note", v.note}};
}

void to_json(json& j, const AdaptationParams& p) {
  j = json{{"k", p.k}, {"beta", p.beta}, {"p", p.p}, {"delta_i", p.delta_i}, {"a", p.a}};
}

void to_json(json& j, const AdaptationTriple& t) {
  j = json{{"unit_id", t.unit_id}, {"sr", t.sr}, {"pr", t.pr}, {"ss", t.ss}};
}

void to_json(json& j, const FixedPoints& f) {
  j = json{{"sr", f.sr}, {"pr", f.pr}, {"ss", f.ss}, {"tr", f.tr}};
}

void to_json(json& j, const InequalityVerdict& v) {
  j = json{{"lower_ok", v.lower_ok},
           {"upper_ok", v.upper_ok},
           {"margin_lo", v.margin_lo},
           {"margin_hi", v.margin_hi}};
}

void to_json(json& j, const SlopeFit& s) {
  j = json{{"slope", s.slope}, {"r", s.r}, {"n", s.n}};
}

void to_json(json& j, const CorpusReport& r) {
  json errors = json::array();
  for (const auto& e : r.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
  j = json{{"n_rows", r.n_rows},
           {"n_pass_lower", r.n_pass_lower},
           {"n_pass_upper", r.n_pass_upper},
           {"worst_margins", {{"lower", r.worst_margin_lo}, {"upper", r.worst_margin_hi}}},
           {"slope_fit", optional_json(r.slope_fit)},
           {"rows", r.rows},
           {"row_errors", errors}};
}

void to_json(json& j, const SamplingSpec& s) {
  j = json{{"family", s.family == Family::gaussian ? "gaussian" : "poisson"},
           {"mu", s.mu},
           {"sigma2", s.observation_variance()},
           {"m", s.m},
           {"sigma_r2", s.sigma_r2},
           {"trials", s.trials},
           {"seed", s.seed}};
}

void to_json(json& j, const EntropyValidation& v) {
  j = json{{"h_empirical", v.h_empirical},
           {"h_formula", v.h_formula},
           {"gap", v.gap},
           {"tolerance", v.tolerance},
           {"h_nearest_neighbor", v.h_nearest_neighbor},
           {"asymptotic", v.asymptotic},
           {"pass", optional_json(v.pass)}};
}

void to_json(json& j, const VarianceScaling& v) {
  json ratios = json::array();
  for (const auto& r : v.ratios) ratios.push_back({{"m", r.m}, {"ratio", r.ratio}});
  j = json{{"ratios", ratios}, {"pass", optional_json(v.pass)}};
}

void to_json(json& j, const Normality& n) {
  j = json{{"skewness", n.skewness}, {"excess_kurtosis", n.excess_kurtosis}, {"pass", n.pass}};
}

NoiseModel noise_from_json(const json& j, const std::string& where) {
  const double r = number_at(j, "sigma_r2", where);
  std::string convention = "mutual_info";
  if (j.contains("convention")) {
    const json& c = j.at("convention");
    if (!c.is_string()) throw Error(ErrorCode::parse_error, where + ".convention: expected a string");
    convention = c.get<std::string>();
  }
  if (convention == "mutual_info") return NoiseModel::mutual_info(r);
  if (convention == "raw") {
    const double c = j.contains("constant") ? number_at(j, "constant", where) : 0.0;
    return NoiseModel::raw(r, c);
  }
  throw Error(ErrorCode::parse_error,
              where + ".convention: expected 'mutual_info' or 'raw', got '" + convention + "'");
}

InferenceState state_from_json(const json& j, const std::string& where) {
  return InferenceState{number_at(j, "m", where), number_at(j, "sigma2", where)};
}

ProcessPath path_from_json(const json& j, const std::string& where) {
  std::string base;
  const json& arr = array_of(j, "nodes", where, base);
  std::vector<PathNode> nodes;
  nodes.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    nodes.push_back(state_from_json(arr[i], base + "[" + std::to_string(i) + "]"));
  }
  return ProcessPath(std::move(nodes));
}

StimulusLoop loop_from_json(const json& j, const std::string& where) {
  std::string base;
  const json& arr = array_of(j, "points", where, base);
  std::vector<LoopPoint> pts;
  pts.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = base + "[" + std::to_string(i) + "]";
    pts.push_back({number_at(arr[i], "mu", at), number_at(arr[i], "m", at)});
  }
  return StimulusLoop(std::move(pts));
}

AdaptationParams params_from_json(const json& j, const std::string& where) {
  AdaptationParams p;
  p.k = number_at(j, "k", where);
  p.beta = number_at(j, "beta", where);
  p.p = number_at(j, "p", where);
  p.delta_i = number_at(j, "delta_i", where);
  p.a = number_at(j, "a", where);
  return p;
}

AdaptationTriple triple_from_json(const json& j, const std::string& where) {
  const json& id = field(j, "unit_id", where);
  if (!id.is_string()) throw Error(ErrorCode::parse_error, where + ".unit_id: expected a string");
  return AdaptationTriple{id.get<std::string>(), number_at(j, "sr", where),
                          number_at(j, "pr", where), number_at(j, "ss", where)};
}

}  // namespace infothermo
