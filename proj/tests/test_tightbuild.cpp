#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gordian/clearance.hpp"
#include "gordian/error.hpp"
#include "gordian/linkmodel.hpp"
#include "gordian/tightbuild.hpp"
#include "oracles.hpp"

using namespace gordian;

namespace {

constexpr double kTarget = 16 + 14 * kPi;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Validation;
}

double theta_at(int k) { return kPi / 3 + (kPi / 6) * k / 19.0; }

}  // namespace

TEST(Bounds, MinHullPerimeter) {
  EXPECT_EQ(min_hull_perimeter(1), 0.0);
  EXPECT_EQ(min_hull_perimeter(2), 4.0);
  EXPECT_EQ(min_hull_perimeter(3), 6.0);
  EXPECT_EQ(min_hull_perimeter(4), 8.0);
  EXPECT_EQ(kind_of([] { min_hull_perimeter(0); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { min_hull_perimeter(5); }), ErrorKind::Domain);
}

TEST(Bounds, OracleAgreement) {
  for (int n = 1; n <= 4; ++n)
    EXPECT_NEAR(oracle::search_min_hull_perimeter(n, 100, 1000 + static_cast<unsigned>(n)),
                min_hull_perimeter(n), 1e-6)
        << "n=" << n;
}

TEST(Bounds, SquareAndRhombiAttainFour) {
  for (int k = 0; k < 20; ++k) {
    const auto c = four_disk_centers(ModuliPoint(theta_at(k)));
    std::vector<Vec2> pts(c.begin(), c.end());
    EXPECT_NEAR(oracle::gift_wrap_perimeter(pts), 8.0, 1e-12);
    EXPECT_GE(oracle::min_pairwise_distance(pts), 2.0 - 1e-12);
  }
}

TEST(Bounds, ComponentAndTotal) {
  EXPECT_NEAR(component_lower_bound(1), kTwoPi, 1e-15);
  EXPECT_NEAR(component_lower_bound(2), 4 + kTwoPi, 1e-15);
  EXPECT_NEAR(component_lower_bound(3), 6 + kTwoPi, 1e-15);
  EXPECT_NEAR(component_lower_bound(4), 8 + kTwoPi, 1e-15);
  EXPECT_EQ(kind_of([] { component_lower_bound(0); }), ErrorKind::Domain);
  EXPECT_NEAR(total_lower_bound(chain2_blueprint()), 4 * kPi, 1e-14);
  EXPECT_NEAR(total_lower_bound(star_blueprint()), 8 + 10 * kPi, 1e-13);
  EXPECT_NEAR(total_lower_bound(default_blueprint()), kTarget, 1e-13);
}

TEST(Moduli, DomainAndCorners) {
  EXPECT_EQ(kind_of([] { ModuliPoint(kPi / 4); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { ModuliPoint(0.7); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { ModuliPoint(2.0); }), ErrorKind::Domain);
  const auto sq = four_disk_centers(ModuliPoint::square());
  for (const auto& p : sq) {
    EXPECT_EQ(std::abs(p.x()), 1.0);
    EXPECT_EQ(std::abs(p.y()), 1.0);
  }
  const auto eq = four_disk_centers(ModuliPoint::equilateral());
  EXPECT_NEAR((eq[1] - eq[3]).norm(), 2.0, 1e-12);
}

TEST(Moduli, Flatness) {
  for (int k = 0; k < 20; ++k) {
    const ModuliPoint m(theta_at(k));
    EXPECT_NEAR(central_curve(m).length(), 8 + kTwoPi, 1e-9);
    const auto c = four_disk_centers(m);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) EXPECT_GE((c[i] - c[j]).norm(), 2.0 - 1e-12);
  }
}

TEST(Build, RotorAndWingLengths) {
  for (const auto* cfg : {&fixture::R(), &fixture::W()}) {
    EXPECT_NEAR(cfg->total_length() / kTarget, 1.0, 1e-9);
    // Independent per-component check by dense chord sums.
    double dense = 0;
    for (const auto& [label, g] : cfg->geometry) {
      const auto& curve = std::get<ArcSegCurve>(g);
      dense += oracle::sampled_length([&](double s) { return curve.point_at(s < 1 ? s : 0.0); }, 100000);
    }
    EXPECT_NEAR(dense, kTarget, 1e-7);
    const auto r = gehring_thickness(*cfg, 2.5e-7);
    EXPECT_NEAR(r.globalMin, 1.0, 1e-6);
  }
}

TEST(Build, ComponentLengthsMatchBounds) {
  const auto& cfg = fixture::R();
  for (const auto& c : cfg.blueprint.components())
    EXPECT_NEAR(geometry_length(cfg.at(c.label)),
                component_lower_bound(static_cast<int>(cfg.blueprint.degree(c.label))), 1e-12)
        << c.label;
}

TEST(Build, AttachmentPointsOnArcsAtUnitDistance) {
  for (int k : {0, 7, 19}) {
    const ModuliPoint m(theta_at(k));
    const auto central = central_curve(m);
    const auto centers = four_disk_centers(m);
    for (const auto& q : centers) {
      const double a = arc_midpoint_arclength(central, q);
      const double s = a / central.length();
      const Vec3 p = central.point_at(s);
      EXPECT_NEAR((p - Vec3(q.x(), q.y(), 0)).norm(), 1.0, 1e-12);
      EXPECT_TRUE(is_arc(central.pieces()[central.piece_index_at(s)]));
    }
  }
}

TEST(Build, StarBlueprint) {
  const auto cfg = build_tight(star_blueprint(), {"P1", "P2", "P3", "P4"}, ModuliPoint::square());
  EXPECT_NEAR(cfg.total_length(), 8 + 10 * kPi, 1e-12);
  EXPECT_EQ(certify_tight(cfg).verdict, TightnessVerdict::GloballyMinimal);
}

TEST(Build, HopfPair) {
  const auto cfg = build_hopf_pair();
  EXPECT_NEAR(cfg.total_length(), 4 * kPi, 1e-14);
  EXPECT_EQ(certify_tight(cfg).verdict, TightnessVerdict::GloballyMinimal);
}

TEST(Build, Errors) {
  const auto bp = default_blueprint();
  const auto sq = ModuliPoint::square();
  EXPECT_EQ(kind_of([&] { build_tight(bp, {"D1", "P1", "D2"}, sq); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([&] { build_tight(bp, {"D1", "P1", "D2", "d1"}, sq); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([&] { build_tight(chain2_blueprint(), {"A"}, sq); }), ErrorKind::Domain);
}

TEST(Build, ThetaSweepCertifies) {
  for (int k : {0, 5, 11, 19}) {
    for (const auto& order : {rotor_order(), wing_order()}) {
      const auto cfg = build_tight(default_blueprint(), order, ModuliPoint(theta_at(k)));
      EXPECT_EQ(certify_tight(cfg).verdict, TightnessVerdict::GloballyMinimal) << "theta index " << k;
    }
  }
}

TEST(Certify, Canonical) {
  for (const auto* cfg : {&fixture::R(), &fixture::W()}) {
    const auto cert = certify_tight(*cfg);
    EXPECT_EQ(cert.verdict, TightnessVerdict::GloballyMinimal);
    EXPECT_NEAR(cert.totalAchieved, kTarget, 1e-9 * kTarget);
    EXPECT_NEAR(cert.totalLowerBound, kTarget, 1e-12);
    EXPECT_NEAR(cert.clearance, 1.0, 1e-6);
    EXPECT_TRUE(cert.linkingOk);
  }
}

TEST(Certify, RigidMotionKeepsVerdict) {
  const auto t = Similarity::rotation_about(Vec3(1, 1, 0).normalized(), 0.9, Vec3(3, 0, 0))
                     .compose(Similarity::translation_by(Vec3(0, 4, -2)));
  EXPECT_EQ(certify_tight(fixture::R().transformed(t)).verdict, TightnessVerdict::GloballyMinimal);
}

TEST(Certify, ScaledUpIsNotTight) {
  const auto cert = certify_tight(fixture::R().transformed(Similarity::scaling(1.1)));
  EXPECT_EQ(cert.verdict, TightnessVerdict::NotTight);
  EXPECT_GT(cert.totalAchieved, cert.totalLowerBound);
}

TEST(Certify, EarPushedInwardIsInvalid) {
  auto cfg = fixture::R();
  const auto& central = std::get<ArcSegCurve>(cfg.at("C"));
  const auto centers = four_disk_centers(ModuliPoint::square());
  // P1 sits second in the rotor order, on the arc around disk 1.
  const double s = arc_midpoint_arclength(central, centers[1]) / central.length();
  const Vec3 c = central.point_at(s);
  const Vec3 inward = (Vec3(centers[1].x(), centers[1].y(), 0) - c).normalized();
  cfg.geometry.at("P1") = transform_geometry(cfg.at("P1"), Similarity::translation_by(0.2 * inward));
  const auto cert = certify_tight(cfg);
  EXPECT_EQ(cert.verdict, TightnessVerdict::Invalid);
  EXPECT_NEAR(cert.clearance, 0.8, 1e-6);
}

// Pierce points of different components only need to be 1 apart, so each
// decorated ear can wrap two disks at distance 1 instead of 2. The result
// keeps clearance 1 and the blueprint's linking yet is shorter than the
// per-component formula bound.
TEST(Bounds, FormulaIsNotALowerBoundAtClearanceOne) {
  auto cfg = fixture::R();
  const auto& central = std::get<ArcSegCurve>(cfg.at("C"));
  const auto centers = four_disk_centers(ModuliPoint::square());
  const Vec3 z = Vec3::UnitZ();
  const std::vector<std::pair<std::string, std::string>> decorated{{"D1", "d1"}, {"D2", "d2"}};
  const std::size_t disk_of[2] = {0, 2};
  for (std::size_t i = 0; i < 2; ++i) {
    const double s = arc_midpoint_arclength(central, centers[disk_of[i]]) / central.length();
    const Vec3 c = central.point_at(s);
    const Vec3 t = central.tangent_at(s);
    const Vec3 in = z.cross(t);
    const PlanarFrame normal_plane{c, in, z, in.cross(z)};
    cfg.geometry.at(decorated[i].first) = disk_belt(normal_plane, Vec2(0, 0), 1.0, Vec2(0, 1), 1.0);
    const PlanarFrame deco{c + 2 * z, t, z, t.cross(z)};
    cfg.geometry.at(decorated[i].second) = ArcSegCurve({Arc{deco, 1.0, -kPi / 2, kTwoPi}});
  }
  EXPECT_NEAR(cfg.total_length(), 12 + 14 * kPi, 1e-12);
  EXPECT_TRUE(validate(cfg).ok());
  const auto r = gehring_thickness(cfg, 2.5e-7);
  EXPECT_NEAR(r.globalMin, 1.0, 1e-6);
  EXPECT_LT(cfg.total_length(), total_lower_bound(cfg.blueprint) - 3.9);
}
