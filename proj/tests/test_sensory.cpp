#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "infothermo/sensory.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace infothermo;

namespace {
const AdaptationParams kRef{2.0, 1.0, 2.0, 1.0, 1.0};
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST(MOfT, Values) {
  EXPECT_DOUBLE_EQ(m_of_t(0.0, 3.0, kRef), 1.0);
  EXPECT_DOUBLE_EQ(m_of_t(kInf, 3.0, kRef), 4.0);
  EXPECT_NEAR(m_of_t(std::log(2.0), 3.0, kRef), 2.5, 1e-15);
}

TEST(MOfT, MatchesEulerIntegration) {
  // Fine explicit Euler of dm/dt = -a (m - m_eq) as an independent check.
  const AdaptationParams p{1.0, 1.0, 1.5, 2.0, 0.8};
  const double m_eq = std::pow(5.0, 0.75);
  double m = std::pow(2.0, 0.75);
  const double h = 1e-6;
  for (int i = 0; i < 2000000; ++i) m += -p.a * (m - m_eq) * h;
  EXPECT_NEAR(m_of_t(2.0, 3.0, p), m, 1e-5);
}

TEST(FiringRate, ClosedForms) {
  EXPECT_NEAR(firing_rate(3.0, 0.0, kRef), std::log(17.0), 1e-14);
  for (double t : {0.0, 0.3, 5.0, kInf}) EXPECT_NEAR(firing_rate(0.0, t, kRef), std::log(2.0), 1e-15);
  EXPECT_NEAR(firing_rate(3.0, kInf, kRef), std::log(5.0), 1e-14);
  EXPECT_NEAR(firing_rate(3.0, 0.0, kRef), 2.8332, 5e-5);
  EXPECT_NEAR(firing_rate(3.0, kInf, kRef), 1.6094, 5e-5);
}

TEST(FiringRate, Monotonicity) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 300; ++k) {
    const AdaptationParams p = random_params(rng);
    const double i = std::exp(std::uniform_real_distribution<double>(-5.0, 4.0)(rng));
    double prev = firing_rate(i, 0.0, p);
    for (double t = 0.1; t < 50.0; t *= 1.5) {
      const double f = firing_rate(i, t, p);
      EXPECT_LE(f, prev + 1e-15);
      prev = f;
    }
    EXPECT_GT(firing_rate(i * 1.1, 0.0, p), firing_rate(i, 0.0, p));
    const FixedPoints fp = fixed_points(i, p);
    EXPECT_TRUE(RelNear(firing_rate(i, 0.0, p), fp.pr, 1e-12));
    EXPECT_TRUE(RelNear(firing_rate(i, kInf, p), fp.ss, 1e-12));
    EXPECT_TRUE(RelNear(firing_rate(0.0, kInf, p), fp.sr, 1e-12));
  }
}

TEST(FixedPoints, WorkedPoint) {
  const FixedPoints f = fixed_points(3.0, kRef);
  EXPECT_NEAR(f.sr, std::log(2.0), 1e-15);
  EXPECT_NEAR(f.pr, std::log(17.0), 1e-14);
  EXPECT_NEAR(f.ss, std::log(5.0), 1e-15);
  EXPECT_NEAR(f.tr, std::log(1.25), 1e-15);
  const oracle::Rates o = oracle::sensory_rates(2.0, 1.0, 2.0, 1.0, 3.0);
  EXPECT_NEAR(f.tr, o.tr, 1e-15);
  EXPECT_NEAR(f.sr, 0.6931, 1e-4);
  EXPECT_NEAR(f.pr, 2.8332, 1e-4);
  EXPECT_NEAR(f.ss, 1.6094, 1e-4);
  EXPECT_NEAR(f.tr, 0.2231, 1e-4);
}

TEST(FixedPoints, NoStimulusCollapses) {
  const FixedPoints f = fixed_points(0.0, kRef);
  EXPECT_EQ(f.sr, f.pr);
  EXPECT_EQ(f.sr, f.ss);
  EXPECT_EQ(f.sr, f.tr);
  EXPECT_EQ(cycle_balance(0.0, kRef), 0.0);
}

TEST(FixedPoints, OrderingSweep) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> li(std::log(1e-3), std::log(1e2));
  for (int k = 0; k < 10000; ++k) {
    const AdaptationParams p = random_params(rng);
    const double i = std::exp(li(rng));
    const FixedPoints f = fixed_points(i, p);
    const oracle::Rates o = oracle::sensory_rates(p.k, p.beta, p.p, p.delta_i, i);
    ASSERT_TRUE(RelNear(f.pr, o.pr, 1e-12));
    ASSERT_TRUE(RelNear(f.ss, o.ss, 1e-12));
    ASSERT_LE(f.tr, f.sr);
    ASSERT_LE(f.sr, f.ss);
    ASSERT_LE(f.ss, f.pr);
    ASSERT_TRUE(universal_inequality_check({"u", f.sr, f.pr, f.ss}, 1e-9).holds());
    ASSERT_GE(cycle_balance(i, p), -1e-12);
  }
}

TEST(Inequality, Verdicts) {
  const InequalityVerdict v = universal_inequality_check({"a", 0.6931, 2.8332, 1.6094});
  EXPECT_TRUE(v.holds());
  EXPECT_NEAR(std::sqrt(2.8332 * 0.6931), 1.4013, 1e-4);
  EXPECT_NEAR((2.8332 + 0.6931) / 2, 1.7632, 1e-4);
  const InequalityVerdict eq = universal_inequality_check({"b", 1.5, 1.5, 1.5}, 0.0);
  EXPECT_TRUE(eq.holds());
  EXPECT_EQ(eq.margin_lo, 0.0);
  EXPECT_EQ(eq.margin_hi, 0.0);
  EXPECT_FALSE(universal_inequality_check({"c", 1.0, 4.0, 1.5}).lower_ok);
  EXPECT_FALSE(universal_inequality_check({"d", 1.0, 4.0, 2.6}).upper_ok);
  EXPECT_TRUE(universal_inequality_check({"z", 0.0, 3.0, 0.0}).lower_ok);
}

TEST(CycleBalance, WorkedPoint) {
  const double b = cycle_balance(3.0, kRef);
  EXPECT_NEAR(b, (std::log(17.0) - std::log(5.0)) + (std::log(1.25) - std::log(2.0)), 1e-14);
  EXPECT_NEAR(b, 0.7538, 1e-4);
}

TEST(CycleBalance, EqualsScaledCyclicInformation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> li(std::log(1e-2), std::log(1e2));
  for (int k = 0; k < 200; ++k) {
    const AdaptationParams p = random_params(rng);
    const double i = std::exp(li(rng));
    const AdaptationCycle c = adaptation_cycle(i, p);
    EXPECT_EQ(c.loop.orientation(), Orientation::counterclockwise);
    const double ci = cyclic_information(c.loop, c.scaling, c.noise).line_integral;
    EXPECT_TRUE(RelNear(p.k * ci, cycle_balance(i, p), 1e-3));
  }
}

TEST(Ingest, WellFormed) {
  std::istringstream in("unit_id,sr,pr,ss\na,1,4,2\nb,0.5,3,1.3\n\nc,2,2,2\n");
  const TripleCorpus c = ingest_triples(in);
  ASSERT_EQ(c.triples.size(), 3u);
  EXPECT_TRUE(c.errors.empty());
  EXPECT_EQ(c.triples[1].unit_id, "b");
  EXPECT_DOUBLE_EQ(c.triples[1].pr, 3.0);
  const CorpusReport r = verify_corpus(c);
  EXPECT_EQ(r.n_rows, 3u);
  EXPECT_TRUE(r.all_pass());
  ASSERT_TRUE(r.slope_fit.has_value());
}

TEST(Ingest, BadRowsAreReportedAndSkipped) {
  std::istringstream in("unit_id,sr,pr,ss\r\na,1,4,2\r\nb,1,-3,1\nc,1,x,1\nd,1,2\ne,3,2,2.5\nf,inf,5,5\n");
  const TripleCorpus c = ingest_triples(in);
  ASSERT_EQ(c.triples.size(), 1u);
  ASSERT_EQ(c.errors.size(), 5u);
  EXPECT_EQ(c.errors[0].line, 3u);
  EXPECT_NE(c.errors[0].message.find("line 3"), std::string::npos);
  EXPECT_EQ(c.errors[3].line, 6u);
  EXPECT_NE(c.errors[3].message.find("pr < sr"), std::string::npos);
}

TEST(Ingest, EmptyAndBadHeader) {
  std::istringstream empty("");
  EXPECT_ERROR_CODE(ingest_triples(empty), ErrorCode::empty_input);
  std::istringstream blank("\n\n");
  EXPECT_ERROR_CODE(ingest_triples(blank), ErrorCode::empty_input);
  std::istringstream header("id,a,b,c\n1,2,3,4\n");
  EXPECT_ERROR_CODE(ingest_triples(header), ErrorCode::parse_error);
}

TEST(Ingest, SyntheticCorpusRoundTripPasses) {
  const auto triples = synthetic_triples(5, 2000);
  std::stringstream io;
  write_triples_csv(io, triples);
  const TripleCorpus c = ingest_triples(io);
  ASSERT_EQ(c.triples.size(), triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    ASSERT_EQ(c.triples[i].pr, triples[i].pr);
    ASSERT_EQ(c.triples[i].ss, triples[i].ss);
  }
  const CorpusReport r = verify_corpus(c);
  EXPECT_EQ(r.n_pass_lower, r.n_rows);
  EXPECT_EQ(r.n_pass_upper, r.n_rows);
}

TEST(LoglogSlope, ExactPowerLaw) {
  std::vector<AdaptationTriple> t;
  const double sr0 = 0.8;
  for (double pr : {1.0, 2.0, 5.0, 11.0, 30.0, 80.0}) t.push_back({"u", sr0, pr, std::sqrt(pr * sr0)});
  const SlopeFit f = loglog_slope(t);
  EXPECT_NEAR(f.slope, 0.5, 1e-10);
  EXPECT_NEAR(f.r, 1.0, 1e-10);
}

TEST(LoglogSlope, ModelSweep) {
  std::vector<AdaptationTriple> t;
  for (int j = 0; j < 20; ++j) {
    const double i = 0.01 * std::pow(100.0, j / 19.0);
    const FixedPoints f = fixed_points(i, kRef);
    t.push_back({"u", f.sr, f.pr, f.ss});
  }
  const SlopeFit fit = loglog_slope(t);
  EXPECT_GE(fit.slope, 0.4);
  EXPECT_LE(fit.slope, 0.6);
  EXPECT_NEAR(fit.slope, 0.53986, 1e-5);
  EXPECT_NEAR(fit.r, 0.99967, 1e-5);
}

TEST(LoglogSlope, Errors) {
  std::vector<AdaptationTriple> two{{"a", 1, 2, 1.5}, {"b", 1, 3, 1.6}};
  EXPECT_ERROR_CODE(loglog_slope(two), ErrorCode::insufficient_data);
  std::vector<AdaptationTriple> flat{{"a", 1, 2, 1.5}, {"b", 1, 2, 1.6}, {"c", 1, 2, 1.4}};
  EXPECT_ERROR_CODE(loglog_slope(flat), ErrorCode::insufficient_variation);
}

TEST(Params, Validation) {
  EXPECT_ERROR_CODE(fixed_points(1.0, AdaptationParams{0.0, 1, 1, 1, 1}), ErrorCode::invalid_argument);
  EXPECT_ERROR_CODE(fixed_points(-1.0, kRef), ErrorCode::invalid_argument);
}
