#include "infothermo/sensory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "infothermo/error.hpp"

namespace infothermo {

namespace {

void check_stimulus(double i) {
  if (!std::isfinite(i) || i < 0.0) {
    throw Error(ErrorCode::invalid_argument, "stimulus intensity must be finite and >= 0");
  }
}

double rate(double k, double x) { return 0.5 * k * std::log1p(x); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

void AdaptationParams::validate() const {
  for (double v : {k, beta, p, delta_i, a}) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      std::ostringstream os;
      os << "adaptation parameters must be finite and > 0 (k=" << k << ", beta=" << beta
         << ", p=" << p << ", delta_i=" << delta_i << ", a=" << a << ")";
      throw Error(ErrorCode::invalid_argument, os.str());
    }
  }
}

double m_of_t(double t, double i, const AdaptationParams& params) {
  params.validate();
  check_stimulus(i);
  if (std::isnan(t) || t < 0.0) throw Error(ErrorCode::invalid_argument, "t must be >= 0");
  const double m0 = std::pow(params.delta_i, 0.5 * params.p);
  const double m_eq = std::pow(i + params.delta_i, 0.5 * params.p);
  const double decay = std::exp(-params.a * t);
  return m0 * decay + m_eq * (1.0 - decay);
}

double firing_rate(double i, double t, const AdaptationParams& params) {
  const double m = m_of_t(t, i, params);
  return rate(params.k, params.beta * std::pow(i + params.delta_i, params.p) / m);
}

FixedPoints fixed_points(double i, const AdaptationParams& params) {
  params.validate();
  check_stimulus(i);
  const double half = 0.5 * params.p;
  const double on = i + params.delta_i;
  const double b = params.beta;
  FixedPoints f;
  f.sr = rate(params.k, b * std::pow(params.delta_i, half));
  f.pr = rate(params.k, b * std::pow(on, params.p) / std::pow(params.delta_i, half));
  f.ss = rate(params.k, b * std::pow(on, half));
  f.tr = rate(params.k, b * std::pow(params.delta_i, params.p) / std::pow(on, half));
  return f;
}

InequalityVerdict universal_inequality_check(const AdaptationTriple& t, double tol) {
  InequalityVerdict v;
  v.margin_lo = t.ss - std::sqrt(t.pr * t.sr);
  v.margin_hi = 0.5 * (t.pr + t.sr) - t.ss;
  v.lower_ok = v.margin_lo >= -tol;
  v.upper_ok = v.margin_hi >= -tol;
  return v;
}

double cycle_balance(double i, const AdaptationParams& params) {
  const FixedPoints f = fixed_points(i, params);
  return (f.pr - f.ss) + (f.tr - f.sr);
}

AdaptationCycle adaptation_cycle(double i, const AdaptationParams& params) {
  params.validate();
  check_stimulus(i);
  const double mu0 = params.delta_i;
  const double mu1 = i + params.delta_i;
  const double m0 = std::pow(mu0, 0.5 * params.p);
  const double m1 = std::pow(mu1, 0.5 * params.p);
  return AdaptationCycle{
      StimulusLoop({{mu0, m0}, {mu1, m0}, {mu1, m1}, {mu0, m1}, {mu0, m0}}),
      ConstitutiveScaling{params.beta, params.p},
      NoiseModel::mutual_info(1.0),
  };
}

TripleCorpus ingest_triples(std::istream& in) {
  TripleCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto fields = split(body);
    if (!have_header) {
      std::vector<std::string> names(fields.begin(), fields.end());
      if (names != std::vector<std::string>{"unit_id", "sr", "pr", "ss"}) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_no) + ": expected header unit_id,sr,pr,ss");
      }
      have_header = true;
      continue;
    }
    auto reject = [&](const std::string& why) {
      corpus.errors.push_back({line_no, "line " + std::to_string(line_no) + ": " + why});
    };
    if (fields.size() != 4) {
      reject("expected 4 fields, found " + std::to_string(fields.size()));
      continue;
    }
    AdaptationTriple t{std::string(fields[0]), 0.0, 0.0, 0.0};
    static constexpr const char* names[] = {"sr", "pr", "ss"};
    double* slots[] = {&t.sr, &t.pr, &t.ss};
    bool ok = true;
    for (int c = 0; c < 3 && ok; ++c) {
      const auto v = parse_number(fields[c + 1]);
      if (!v) {
        reject(std::string(names[c]) + " is not a number: '" + std::string(fields[c + 1]) + "'");
        ok = false;
      } else if (!std::isfinite(*v) || *v < 0.0) {
        reject(std::string(names[c]) + " must be finite and >= 0");
        ok = false;
      } else {
        *slots[c] = *v;
      }
    }
    if (!ok) continue;
    if (t.pr < t.sr) {
      reject("pr < sr");
      continue;
    }
    corpus.triples.push_back(std::move(t));
  }
  if (!have_header) throw Error(ErrorCode::empty_input, "no triples: input is empty");
  return corpus;
}

void write_triples_csv(std::ostream& out, std::span<const AdaptationTriple> triples) {
  out << "unit_id,sr,pr,ss\n";
  char buf[32];
  auto num = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
  };
  for (const auto& t : triples) {
    out << t.unit_id << ',' << num(t.sr);
    out << ',' << num(t.pr);
    out << ',' << num(t.ss) << '\n';
  }
}

SlopeFit loglog_slope(std::span<const AdaptationTriple> triples) {
  if (triples.size() < 3) {
    throw Error(ErrorCode::insufficient_data,
                "slope fit needs at least 3 triples, got " + std::to_string(triples.size()));
  }
  const auto n = static_cast<double>(triples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& t : triples) {
    if (!(t.pr > 0.0) || !(t.ss > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "slope fit needs pr > 0 and ss > 0 (unit '" +
                                                   t.unit_id + "')");
    }
    mx += std::log(t.pr);
    my += std::log(t.ss);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& t : triples) {
    const double dx = std::log(t.pr) - mx;
    const double dy = std::log(t.ss) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 1e-24 * n * std::max(1.0, mx * mx))) {
    throw Error(ErrorCode::insufficient_variation, "all pr values are equal");
  }
  SlopeFit fit;
  fit.n = triples.size();
  fit.slope = sxy / sxx;
  fit.r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return fit;
}

CorpusReport verify_corpus(const TripleCorpus& corpus, double tol) {
  CorpusReport rep;
  rep.errors = corpus.errors;
  rep.n_rows = corpus.triples.size();
  rep.worst_margin_lo = std::numeric_limits<double>::infinity();
  rep.worst_margin_hi = std::numeric_limits<double>::infinity();
  std::vector<AdaptationTriple> positive;
  for (const auto& t : corpus.triples) {
    const InequalityVerdict v = universal_inequality_check(t, tol);
    rep.n_pass_lower += v.lower_ok;
    rep.n_pass_upper += v.upper_ok;
    rep.worst_margin_lo = std::min(rep.worst_margin_lo, v.margin_lo);
    rep.worst_margin_hi = std::min(rep.worst_margin_hi, v.margin_hi);
    rep.rows.push_back(v);
    if (t.pr > 0.0 && t.ss > 0.0) positive.push_back(t);
  }
  if (rep.n_rows == 0) rep.worst_margin_lo = rep.worst_margin_hi = 0.0;
  try {
    rep.slope_fit = loglog_slope(positive);
  } catch (const Error&) {
    rep.slope_fit.reset();
  }
  return rep;
}

AdaptationParams random_params(std::mt19937_64& rng) {
  auto log_uniform = [&](double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
  };
  AdaptationParams p;
  p.k = log_uniform(0.1, 10.0);
  p.beta = log_uniform(1e-2, 1e2);
  p.p = log_uniform(0.2, 3.0);
  p.delta_i = log_uniform(1e-2, 10.0);
  p.a = log_uniform(0.1, 10.0);
  return p;
}

std::vector<AdaptationTriple> synthetic_triples(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<AdaptationTriple> out;
  out.reserve(count);
  std::uniform_real_distribution<double> log_i(std::log(1e-3), std::log(1e2));
  for (std::size_t n = 0; n < count; ++n) {
    const AdaptationParams p = random_params(rng);
    const FixedPoints f = fixed_points(std::exp(log_i(rng)), p);
    out.push_back({"unit" + std::to_string(n), f.sr, f.pr, f.ss});
  }
  return out;
}

}  // namespace infothermo
