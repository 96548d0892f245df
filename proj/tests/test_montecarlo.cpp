#include "oracles.hpp"
#include "support.hpp"
#include "voxsim/montecarlo.hpp"
#include "voxsim/nlp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace voxsim;

namespace {

const Voxicon& vox() { return *vtest::stock_voxicon(); }

GroundedEvent grounded(const std::string& sentence, const Scene& s) {
  GroundingResult g = ground(parse(sentence, vox()), s, vox());
  if (!g.ok()) throw Error(g.failure().kind, g.failure().message);
  return g.event();
}

ParameterSpec spec_named(const GroundedEvent& e, const std::string& name) {
  for (const auto& spec : e.unspecified)
    if (spec.name == name) return spec;
  throw Error(ErrorKind::invalid_argument, "no spec " + name);
}

Sample synthetic(double value, bool accepted = true) {
  Sample s;
  s.value = value;
  s.accepted = accepted;
  return s;
}

double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

}  // namespace

TEST(MonteCarlo, EmptyPlaneAcceptsEveryDirection) {
  Scene s = vtest::fixture("empty_plane.scene");
  GroundedEvent e = grounded("the ball rolled", s);
  MonteCarloConfig cfg;
  auto samples = sample(spec_named(e, "direction"), e, s, vox(), 100, 3, cfg);
  ASSERT_EQ(samples.size(), 100u);
  for (const auto& smp : samples) {
    EXPECT_TRUE(smp.accepted) << smp.summary.reason;
    double v = std::get<double>(smp.value);
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 360.0);
    double d = std::get<double>(smp.assignment.at("distance"));
    EXPECT_GE(d, 0.1);
    EXPECT_LE(d, 2.0);
  }
}

TEST(MonteCarlo, WallEastMatchesBruteForce) {
  Scene s = vtest::fixture("wall_east.scene");
  GroundedEvent e = grounded("the ball rolled", s);
  ParameterSpec dir = spec_named(e, "direction");
  MonteCarloConfig cfg;
  auto samples = sample(dir, e, s, vox(), 400, 11, cfg);
  PrototypeEstimate est = prototype(samples, dir, cfg, 11);
  vtest::WallOracle oracle = vtest::wall_oracle(s);

  // Roughly half the circle is blocked; distances shorter than the gap pass
  // in every direction, so somewhat more than half survive.
  EXPECT_GT(oracle.acceptance, 0.5);
  EXPECT_LT(oracle.acceptance, 0.65);
  double sigma = std::sqrt(oracle.acceptance * (1 - oracle.acceptance) / samples.size());
  EXPECT_NEAR(est.acceptance(), oracle.acceptance, 4 * sigma);
  EXPECT_EQ(est.accepted + est.rejected, 400);

  ASSERT_EQ(est.verdict, PrototypeEstimate::Verdict::value) << "dispersion " << est.dispersion;
  double mean = std::get<double>(*est.value);
  EXPECT_LT(angle_gap(mean, 180.0), 15.0);
  EXPECT_LT(angle_gap(mean, oracle.mean_deg), 5.0) << mean << " vs " << oracle.mean_deg;

  // Every rejection here is the wall.
  for (const auto& smp : samples)
    if (!smp.accepted) EXPECT_TRUE(smp.summary.interpenetration) << smp.summary.reason;
}

TEST(MonteCarlo, SamplingIsSeedDeterministic) {
  Scene s = vtest::fixture("wall_east.scene");
  GroundedEvent e = grounded("the ball rolled", s);
  ParameterSpec dir = spec_named(e, "direction");
  MonteCarloConfig cfg;
  auto one = sample(dir, e, s, vox(), 1, 5, cfg), again = sample(dir, e, s, vox(), 1, 5, cfg);
  EXPECT_EQ(std::get<double>(one[0].value), std::get<double>(again[0].value));
  EXPECT_NE(std::get<double>(one[0].value), std::get<double>(sample(dir, e, s, vox(), 1, 6, cfg)[0].value));

  auto a = sample(dir, e, s, vox(), 30, 9, cfg), b = sample(dir, e, s, vox(), 30, 9, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(std::get<double>(a[i].value), std::get<double>(b[i].value));
    EXPECT_EQ(a[i].accepted, b[i].accepted);
    EXPECT_EQ(a[i].summary.steps, b[i].summary.steps);
  }
  // A longer run starts with the shorter one.
  auto longer = sample(dir, e, s, vox(), 40, 9, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(std::get<double>(a[i].value), std::get<double>(longer[i].value));
  EXPECT_THROW(sample(dir, e, s, vox(), 0, 9, cfg), Error);
}

TEST(MonteCarlo, AcceptedSamplesReplayCleanly) {
  Scene s = vtest::fixture("wall_east.scene");
  GroundedEvent e = grounded("the ball rolled", s);
  MonteCarloConfig cfg;
  auto samples = sample(spec_named(e, "direction"), e, s, vox(), 20, 21, cfg);
  int replayed = 0;
  for (const auto& smp : samples) {
    if (!smp.accepted) continue;
    GroundedEvent bound = e;
    for (const auto& [name, v] : smp.assignment) bound.parameters[name] = v;
    TrajectorySummary again = evaluate(bound, s, vox(), cfg);
    EXPECT_TRUE(again.accepted()) << again.reason;
    EXPECT_EQ(again.steps, smp.summary.steps);
    ++replayed;
  }
  EXPECT_GT(replayed, 0);
}

TEST(MonteCarlo, TightClusterGivesItsMean) {
  ParameterSpec dir{"direction", DomainKind::angle, 0, 360, Vec2::Zero(), "E1"};
  std::vector<Sample> samples;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(170.0, 190.0);
  for (int i = 0; i < 200; ++i) samples.push_back(synthetic(u(rng)));
  PrototypeEstimate est = prototype(samples, dir, MonteCarloConfig{});
  ASSERT_EQ(est.verdict, PrototypeEstimate::Verdict::value);
  EXPECT_LT(angle_gap(std::get<double>(*est.value), 180.0), 2.0);
  EXPECT_LT(est.dispersion, 0.01);
}

TEST(MonteCarlo, WrapAroundCluster) {
  ParameterSpec dir{"direction", DomainKind::angle, 0, 360, Vec2::Zero(), "E1"};
  std::vector<Sample> samples;
  for (double v : {350.0, 355.0, 0.0, 5.0, 10.0}) samples.push_back(synthetic(v));
  PrototypeEstimate est = prototype(samples, dir, MonteCarloConfig{});
  ASSERT_EQ(est.verdict, PrototypeEstimate::Verdict::value);
  EXPECT_LT(angle_gap(std::get<double>(*est.value), 0.0), 1e-9);
}

TEST(MonteCarlo, UniformAnglesHaveNoPrototype) {
  ParameterSpec dir{"direction", DomainKind::angle, 0, 360, Vec2::Zero(), "E1"};
  std::vector<Sample> samples;
  for (int i = 0; i < 360; ++i) samples.push_back(synthetic(i));
  PrototypeEstimate est = prototype(samples, dir, MonteCarloConfig{});
  EXPECT_EQ(est.verdict, PrototypeEstimate::Verdict::none_evident);
  EXPECT_NEAR(est.dispersion, 1.0, 1e-9);
}

TEST(MonteCarlo, LowAcceptanceHasNoPrototype) {
  ParameterSpec dir{"direction", DomainKind::angle, 0, 360, Vec2::Zero(), "E1"};
  std::vector<Sample> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(synthetic(180.0, i < 10));
  PrototypeEstimate est = prototype(samples, dir, MonteCarloConfig{});
  EXPECT_EQ(est.accepted, 10);
  EXPECT_EQ(est.rejected, 90);
  EXPECT_EQ(est.verdict, PrototypeEstimate::Verdict::none_evident);
}

TEST(MonteCarlo, LengthAndPointPrototypes) {
  ParameterSpec len{"distance", DomainKind::length, 0.1, 2.0, Vec2::Zero(), "E1"};
  std::vector<Sample> tight, spread;
  for (int i = 0; i < 100; ++i) {
    tight.push_back(synthetic(1.0 + 0.001 * (i - 50)));
    spread.push_back(synthetic(i % 2 == 0 ? 0.1 : 2.0));
  }
  PrototypeEstimate t = prototype(tight, len, MonteCarloConfig{});
  ASSERT_EQ(t.verdict, PrototypeEstimate::Verdict::value);
  EXPECT_NEAR(std::get<double>(*t.value), 0.9995, 1e-9);
  PrototypeEstimate sp = prototype(spread, len, MonteCarloConfig{});
  EXPECT_EQ(sp.verdict, PrototypeEstimate::Verdict::none_evident);
  EXPECT_NEAR(sp.dispersion, 0.95 / 1.05, 1e-9);

  ParameterSpec point{"point", DomainKind::surface_point, 0, 0, Vec2(1.0, 1.0), "E2"};
  std::vector<Sample> pts;
  for (int i = 0; i < 10; ++i) {
    Sample smp;
    smp.value = Vec2(0.2 + 0.001 * i, -0.1);
    smp.accepted = true;
    pts.push_back(smp);
  }
  PrototypeEstimate p = prototype(pts, point, MonteCarloConfig{});
  ASSERT_EQ(p.verdict, PrototypeEstimate::Verdict::value);
  EXPECT_NEAR((std::get<Vec2>(*p.value) - Vec2(0.2045, -0.1)).norm(), 0.0, 1e-12);
}

TEST(MonteCarlo, TighteningNeverLosesAPrototype) {
  ParameterSpec dir{"direction", DomainKind::angle, 0, 360, Vec2::Zero(), "E1"};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> center(0, 360), width(10, 120), u(-1, 1);
  std::bernoulli_distribution keep(0.6);
  for (int trial = 0; trial < 200; ++trial) {
    double c = center(rng), w = width(rng);
    std::vector<Sample> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(synthetic(std::fmod(c + w * u(rng) + 360.0, 360.0), keep(rng)));
    MonteCarloConfig cfg;
    PrototypeEstimate before = prototype(samples, dir, cfg);
    if (before.verdict != PrototypeEstimate::Verdict::value) continue;
    double m = std::get<double>(*before.value);
    for (double shrink : {0.8, 0.5, 0.1}) {
      std::vector<Sample> tighter = samples;
      for (auto& smp : tighter) {
        double v = std::get<double>(smp.value);
        double off = std::remainder(v - m, 360.0);
        smp.value = std::fmod(m + shrink * off + 360.0, 360.0);
      }
      EXPECT_EQ(prototype(tighter, dir, cfg).verdict, PrototypeEstimate::Verdict::value) << trial;
    }
  }
}

TEST(MonteCarlo, ResolveLeavesBoundEventsAlone) {
  Scene s = vtest::stock_scene();
  GroundedEvent e = grounded("put the ball on the table", s);
  Resolution r = resolve(e, s, vox(), MonteCarloConfig{});
  EXPECT_TRUE(r.reports.empty());
  EXPECT_TRUE(r.event.parameters.empty());
  EXPECT_EQ(r.event.predicate, e.predicate);
}

TEST(MonteCarlo, ResolveBindsRollParameters) {
  Scene s = vtest::stock_scene();
  GroundedEvent e = grounded("the ball rolled", s);
  MonteCarloConfig cfg;
  cfg.seed = 42;
  Resolution r = resolve(e, s, vox(), cfg);
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_EQ(r.reports[0].spec.name, "direction");
  EXPECT_EQ(r.reports[1].spec.name, "distance");
  EXPECT_TRUE(r.event.open_parameters().empty());
  for (const auto& rep : r.reports) EXPECT_EQ(rep.estimate.accepted + rep.estimate.rejected, cfg.samples);
  EXPECT_TRUE(evaluate(r.event, s, vox(), cfg).accepted());
  Resolution again = resolve(e, s, vox(), cfg);
  EXPECT_EQ(to_string(again.event.parameters.at("direction")), to_string(r.event.parameters.at("direction")));
  EXPECT_EQ(to_string(again.event.parameters.at("distance")), to_string(r.event.parameters.at("distance")));
}

TEST(MonteCarlo, BoxedInBallIsUnsatisfiable) {
  Scene s = vtest::fixture("boxed_in.scene");
  GroundedEvent e = grounded("the ball rolled", s);
  MonteCarloConfig cfg;
  cfg.samples = 50;
  try {
    resolve(e, s, vox(), cfg);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::unsatisfiable_parameter);
  }
}
