#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "gordian/error.hpp"
#include "gordian/linkmodel.hpp"
#include "gordian/relax.hpp"

using namespace gordian;
using fixture::circle;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Validation;
}

// Radius-3 circles through each other's interiors, clearance 2.
LinkConfiguration loose_pair() {
  return fixture::pair(circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 3),
                       circle(Vec3(2, 0, 0), Vec3::UnitX(), -Vec3::UnitZ(), 3));
}

const RelaxResult& loose_pair_relaxed() {
  static const RelaxResult r = relax(loose_pair());
  return r;
}

LinkConfiguration single(Polyline p) {
  LinkConfiguration c;
  c.blueprint = LinkBlueprint({{"A", ComponentType::Central}}, {});
  c.geometry.emplace("A", std::move(p));
  return c;
}

}  // namespace

TEST(Relax, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0, 1);
  Polyline poly;
  for (int k = 0; k < 40; ++k) {
    const double a = kTwoPi * k / 40.0;
    poly.vertices.emplace_back(3 * std::cos(a) + 0.3 * g(rng), 3 * std::sin(a) + 0.3 * g(rng), 0.3 * g(rng));
  }
  const auto grad = length_gradient(poly);
  std::uniform_int_distribution<std::size_t> pick(0, poly.vertices.size() - 1);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t i = pick(rng);
    Vec3 fd;
    for (int d = 0; d < 3; ++d) {
      Polyline plus = poly, minus = poly;
      plus.vertices[i][d] += h;
      minus.vertices[i][d] -= h;
      fd[d] = (plus.length() - minus.length()) / (2 * h);
    }
    EXPECT_LT((fd - grad[i]).norm() / grad[i].norm(), 1e-6) << "vertex " << i;
  }
}

TEST(Relax, ResampleUniform) {
  Polyline p;
  for (int k = 0; k < 50; ++k) {
    const double a = kTwoPi * std::pow(k / 50.0, 2);
    p.vertices.emplace_back(std::cos(a), std::sin(a), 0);
  }
  const auto r = resample_uniform(p, 80);
  ASSERT_EQ(r.vertices.size(), 80u);
  EXPECT_EQ(r.vertices[0], p.vertices[0]);
  EXPECT_LE(r.length(), p.length() + 1e-12);
  // Vertices sit at equal arclength on the input, so consecutive chords
  // along a circle-like input are close to equal.
  const double step = p.length() / 80;
  for (std::size_t i = 0; i < 80; ++i) EXPECT_LE((r.edge_end(i) - r.edge_start(i)).norm(), step + 1e-12);
}

TEST(Relax, PerturbSigmaZeroAndDeterminism) {
  const auto& R = fixture::R();
  const auto same = perturb(R, 0.0, 7);
  EXPECT_EQ(same.geometry.size(), R.geometry.size());
  for (const auto& [label, g] : R.geometry) EXPECT_TRUE(is_exact(same.at(label))) << label;

  const auto a = perturb(R, 0.05, 7);
  const auto b = perturb(R, 0.05, 7);
  const auto c = perturb(R, 0.05, 8);
  bool differs = false;
  for (const auto& [label, g] : R.geometry) {
    const auto& pa = std::get<Polyline>(a.at(label)).vertices;
    const auto& pb = std::get<Polyline>(b.at(label)).vertices;
    const auto& pc = std::get<Polyline>(c.at(label)).vertices;
    ASSERT_EQ(pa.size(), 128u);
    EXPECT_EQ(pa, pb);
    differs = differs || pa != pc;
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(kind_of([&] { perturb(R, -1.0, 7); }), ErrorKind::Validation);
}

TEST(Relax, PerturbedRotorClearance) {
  // Measured, not exact: noise of 0.05 per coordinate eats into the unit
  // clearance by a few sigma.
  std::vector<Polyline> polys;
  const auto p = perturb(fixture::R(), 0.05, 7);
  for (const auto& c : p.blueprint.components()) polys.push_back(std::get<Polyline>(p.at(c.label)));
  const double clearance = polyline_clearance(polys);
  RecordProperty("perturbed_clearance", std::to_string(clearance));
  EXPECT_GT(clearance, 0.6);
  EXPECT_LT(clearance, 1.0);
}

TEST(Relax, ParamsValidation) {
  auto bad = [](auto edit) {
    RelaxParams p;
    edit(p);
    return kind_of([&] { p.validate(); });
  };
  EXPECT_EQ(bad([](RelaxParams& p) { p.stepSize = 0; }), ErrorKind::Validation);
  EXPECT_EQ(bad([](RelaxParams& p) { p.clearanceTarget = -1; }), ErrorKind::Validation);
  EXPECT_EQ(bad([](RelaxParams& p) { p.convergenceTol = 0; }), ErrorKind::Validation);
  EXPECT_EQ(bad([](RelaxParams& p) { p.penaltyWeight = 3; }), ErrorKind::Validation);
  EXPECT_EQ(bad([](RelaxParams& p) { p.resampleEvery = 0; }), ErrorKind::Validation);
  EXPECT_NO_THROW(RelaxParams{}.validate());
}

TEST(Relax, TwoCirclesReachHopfLength) {
  const auto& r = loose_pair_relaxed();
  EXPECT_TRUE(r.report.converged);
  EXPECT_NEAR(r.report.finalLength / (4 * kPi), 1.0, 0.01);
  EXPECT_GE(r.report.finalClearance, 1.0 - 1e-3);
  EXPECT_EQ(linking_matrix(r.config, 128).values, r.config.blueprint.linking_matrix());
}

TEST(RelaxProperty, SmoothedHistoryNonIncreasing) {
  const auto& h = loose_pair_relaxed().report.lengthHistory;
  const std::size_t window = 10;
  const std::size_t first = RelaxParams{}.resampleEvery;
  ASSERT_GT(h.size(), first + 2 * window);
  double previous = 1e300;
  for (std::size_t i = first; i + window <= h.size(); ++i) {
    double mean = 0;
    for (std::size_t k = 0; k < window; ++k) mean += h[i + k] / window;
    EXPECT_LE(mean, previous * (1 + 1e-4)) << "at " << i;
    previous = mean;
  }
}

TEST(Relax, InitialLinkingMismatch) {
  const auto unlinked = fixture::pair(circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 1),
                                      circle(Vec3(5, 0, 0), Vec3::UnitX(), Vec3::UnitY(), 1));
  EXPECT_EQ(kind_of([&] { relax(unlinked); }), ErrorKind::Validation);
}

TEST(Relax, OverflowIsNumericalFailure) {
  Polyline huge{{Vec3(1e308, 0, 0), Vec3(-1e308, 0, 0), Vec3(0, 1e308, 0)}, true};
  try {
    relax(single(huge));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Numerical);
    EXPECT_NE(std::string(e.what()).find("iteration 1"), std::string::npos) << e.what();
  }
}

TEST(Relax, Deterministic) {
  RelaxParams p;
  p.maxIterations = 200;
  const auto start = perturb(fixture::R(), 0.05, 3);
  const auto a = relax(start, p);
  const auto b = relax(start, p);
  EXPECT_EQ(a.report.lengthHistory, b.report.lengthHistory);
}

// An exactly tight configuration should be a fixed point of the descent.
TEST(Relax, TightRotorIsFixedPoint) {
  RelaxParams p;
  p.maxIterations = 3 * p.resampleEvery;
  const auto r = relax(fixture::R(), p);
  const double start = r.report.lengthHistory.front();
  RecordProperty("length_change", std::to_string(r.report.finalLength - start));
  EXPECT_TRUE(r.report.converged);
  EXPECT_LT(std::abs(r.report.finalLength - start), 1e-4);
}
