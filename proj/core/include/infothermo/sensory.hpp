#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "infothermo/cycle_laws.hpp"
#include "infothermo/state.hpp"

namespace infothermo {

/// Ideal sensory unit: F = k H with H = 1/2 log(1 + beta (I + delta_i)^p / m)
/// and m relaxing at rate a towards m_eq = (I + delta_i)^(p/2).
struct AdaptationParams {
  double k = 1.0;
  double beta = 1.0;
  double p = 1.0;
  double delta_i = 1.0;
  double a = 1.0;

  /// All five parameters must be finite and strictly positive.
  void validate() const;
};

struct AdaptationTriple {
  std::string unit_id;
  double sr = 0.0;
  double pr = 0.0;
  double ss = 0.0;
};

/// m(t) after a step from background to I at t = 0.
double m_of_t(double t, double i, const AdaptationParams& params);

/// F(I, t); t may be +infinity for the adapted response.
double firing_rate(double i, double t, const AdaptationParams& params);

struct FixedPoints {
  double sr = 0.0;  ///< spontaneous
  double pr = 0.0;  ///< peak, t = 0
  double ss = 0.0;  ///< steady state
  double tr = 0.0;  ///< trough: stimulus removed while m is still m_eq(I)
};

FixedPoints fixed_points(double i, const AdaptationParams& params);

struct InequalityVerdict {
  bool lower_ok = false;
  bool upper_ok = false;
  double margin_lo = 0.0;  ///< ss - sqrt(pr sr)
  double margin_hi = 0.0;  ///< (pr + sr)/2 - ss

  bool holds() const { return lower_ok && upper_ok; }
};

/// sqrt(pr sr) <= ss <= (pr + sr)/2, each side with slack `tol`.
InequalityVerdict universal_inequality_check(const AdaptationTriple& triple, double tol = 1e-9);

/// (pr - ss) + (tr - sr).
double cycle_balance(double i, const AdaptationParams& params);

/// The rest -> on -> adapted -> off loop in (mu, m) together with the scaling
/// and noise under which k times its cyclic information equals cycle_balance.
struct AdaptationCycle {
  StimulusLoop loop;
  ConstitutiveScaling scaling;
  NoiseModel noise;
};
AdaptationCycle adaptation_cycle(double i, const AdaptationParams& params);

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct TripleCorpus {
  std::vector<AdaptationTriple> triples;
  std::vector<RowError> errors;
};

/// Reads CSV with header unit_id,sr,pr,ss. Bad rows are reported with their
/// line number and skipped. Throws Error(empty_input) when there is nothing
/// to read and Error(parse_error) for a wrong header.
TripleCorpus ingest_triples(std::istream& in);

void write_triples_csv(std::ostream& out, std::span<const AdaptationTriple> triples);

struct SlopeFit {
  double slope = 0.0;
  double r = 0.0;
  std::size_t n = 0;
};

/// Least-squares slope of log ss against log pr. Throws
/// Error(insufficient_data) below three triples, Error(invalid_argument) for
/// non-positive rates and Error(insufficient_variation) when pr is constant.
SlopeFit loglog_slope(std::span<const AdaptationTriple> triples);

struct CorpusReport {
  std::size_t n_rows = 0;
  std::size_t n_pass_lower = 0;
  std::size_t n_pass_upper = 0;
  double worst_margin_lo = 0.0;
  double worst_margin_hi = 0.0;
  std::vector<InequalityVerdict> rows;
  std::vector<RowError> errors;
  /// Absent when fewer than three usable rows or no variation in pr.
  std::optional<SlopeFit> slope_fit;

  bool all_pass() const { return n_pass_lower == n_rows && n_pass_upper == n_rows; }
};

CorpusReport verify_corpus(const TripleCorpus& corpus, double tol = 1e-9);

/// Log-uniform draws over a few decades for every parameter.
AdaptationParams random_params(std::mt19937_64& rng);

/// Model-generated triples over random parameters and stimuli.
std::vector<AdaptationTriple> synthetic_triples(std::uint64_t seed, std::size_t count);

}  // namespace infothermo
