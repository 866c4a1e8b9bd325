#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "gordian/error.hpp"
#include "gordian/pimap.hpp"
#include "oracles.hpp"

using namespace gordian;

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

CirclePoints4 points(const std::vector<std::string>& labels, const std::vector<double>& s) {
  return CirclePoints4({CirclePoint{labels[0], s[0]}, CirclePoint{labels[1], s[1]},
                        CirclePoint{labels[2], s[2]}, CirclePoint{labels[3], s[3]}});
}

const SymmetryGroup& default_group() {
  static const SymmetryGroup g = blueprint_automorphisms(default_blueprint());
  return g;
}

DihedralClass class_of(const LinkConfiguration& cfg) {
  return dihedral_classify(pi_map(cfg), default_group(), &cfg.blueprint);
}

// Replace one ear of a canonical layout with a circle in the given frame.
LinkConfiguration with_ear(const PlanarFrame& frame, double radius) {
  auto cfg = fixture::R();
  cfg.geometry.at("P1") = ArcSegCurve({Arc{frame, radius, 0.0, kTwoPi}});
  return cfg;
}

struct Attachment {
  Vec3 c, t, in;
};

Attachment attachment(std::size_t disk) {
  const auto& central = std::get<ArcSegCurve>(fixture::R().at("C"));
  const auto centers = four_disk_centers(ModuliPoint::square());
  const double s = arc_midpoint_arclength(central, centers[disk]) / central.length();
  const Vec3 t = central.tangent_at(s);
  return {central.point_at(s), t, Vec3::UnitZ().cross(t)};
}

}  // namespace

TEST(CirclePoints, SortedAndChecked) {
  const auto p = points({"a", "b", "c", "d"}, {0.9, 0.1, 0.5, 0.3});
  EXPECT_EQ(p.labels(), (std::vector<std::string>{"b", "d", "c", "a"}));
  EXPECT_EQ(kind_of([] { points({"a", "b", "c", "d"}, {0.1, 0.1, 0.5, 0.3}); }), ErrorKind::Degenerate);
  EXPECT_EQ(kind_of([] { points({"a", "b", "c", "d"}, {0.1, 1.0, 0.5, 0.3}); }), ErrorKind::Domain);
}

TEST(PiMap, RotorFractions) {
  const auto p = pi_map(fixture::R());
  // Arc midpoints of the square central curve: a quarter arc (pi/4) into
  // each quarter of length 2 + pi/2.
  const double phase = (kPi / 4) / (8 + kTwoPi);
  const std::vector<std::string> want{"D1", "P1", "D2", "P2"};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(p.entries()[k].label, want[k]);
    EXPECT_NEAR(p.entries()[k].s, phase + 0.25 * static_cast<double>(k), 1e-9);
  }
  EXPECT_NEAR(phase, 0.054987, 1e-6);
}

TEST(PiMap, WingFractions) {
  const auto p = pi_map(fixture::W());
  const double phase = (kPi / 4) / (8 + kTwoPi);
  const std::vector<std::string> want{"D1", "D2", "P1", "P2"};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(p.entries()[k].label, want[k]);
    EXPECT_NEAR(p.entries()[k].s, phase + 0.25 * static_cast<double>(k), 1e-9);
  }
}

TEST(PiMap, HopfPairHasNoCentral) {
  EXPECT_EQ(kind_of([] { pi_map(build_hopf_pair()); }), ErrorKind::Domain);
}

TEST(PiMap, LargeEarCrossedTwice) {
  const auto a = attachment(1);
  const PlanarFrame plane{a.c, a.in, Vec3::UnitZ(), a.in.cross(Vec3::UnitZ())};
  EXPECT_EQ(kind_of([&] { pi_map(with_ear(plane, 10.0)); }), ErrorKind::NonGeneric);
}

TEST(PiMap, EarMissingTheCurve) {
  const auto a = attachment(1);
  const PlanarFrame plane{a.c + 3 * Vec3::UnitZ(), a.in, Vec3::UnitZ(), a.in.cross(Vec3::UnitZ())};
  EXPECT_EQ(kind_of([&] { pi_map(with_ear(plane, 1.0)); }), ErrorKind::NonGeneric);
}

TEST(PiMap, NearTangentialCrossing) {
  const auto a = attachment(1);
  const double d = 1e-4;
  const Vec3 u = std::cos(d) * a.t + std::sin(d) * Vec3::UnitZ();
  const PlanarFrame plane{a.c, u, a.in, u.cross(a.in)};
  EXPECT_EQ(kind_of([&] { pi_map(with_ear(plane, 1.0)); }), ErrorKind::IllConditioned);
}

TEST(PiMap, NonPlanarNeighbour) {
  auto cfg = fixture::R();
  auto poly = to_polyline_sampled(cfg.at("P1"), 64);
  for (std::size_t i = 0; i < poly.vertices.size(); i += 2) poly.vertices[i] += 0.3 * Vec3::UnitX();
  cfg.geometry.at("P1") = poly;
  EXPECT_EQ(kind_of([&] { pi_map(cfg); }), ErrorKind::Domain);
}

TEST(OnArc, CanonicalAndSweep) {
  EXPECT_TRUE(on_arc_check(fixture::R()).ok);
  EXPECT_TRUE(on_arc_check(fixture::W()).ok);
  const auto w60 = build_tight(default_blueprint(), wing_order(), ModuliPoint::equilateral());
  EXPECT_TRUE(on_arc_check(w60).ok);
  for (int k = 0; k < 20; ++k) {
    const double theta = kPi / 3 + (kPi / 6) * k / 19.0;
    for (const auto& order : {rotor_order(), wing_order()}) {
      const auto cfg = build_tight(default_blueprint(), order, ModuliPoint(theta));
      const auto report = on_arc_check(cfg);
      EXPECT_TRUE(report.ok) << "theta " << theta;
      EXPECT_EQ(report.placements.size(), 4u);
    }
  }
}

TEST(OnArc, EarOnStraightSide) {
  auto layout = canonical_layout(default_blueprint(), rotor_order(), ModuliPoint::square());
  // First straight side runs from pi/2 to pi/2 + 2 in arclength.
  layout.ears[1].arclength = kPi / 2 + 1.0;
  const auto cfg = realize(layout);
  const auto report = on_arc_check(cfg);
  EXPECT_FALSE(report.ok);
  for (const auto& p : report.placements) EXPECT_EQ(p.onArc, p.label != "P1") << p.label;
}

TEST(OnArc, PolylineCentralIsReported) {
  auto cfg = fixture::R();
  cfg.geometry.at("C") = to_polyline_sampled(cfg.at("C"), 512);
  const auto report = on_arc_check(cfg);
  EXPECT_FALSE(report.ok);
  EXPECT_FALSE(report.note.empty());
}

TEST(Dihedral, SortedAndReflected) {
  const auto g = SymmetryGroup::trivial({"1", "2", "3", "4"});
  const auto a = dihedral_classify(points({"1", "2", "3", "4"}, {0.1, 0.3, 0.6, 0.9}), g);
  const auto b = dihedral_classify(points({"1", "2", "3", "4"}, {0.9, 0.6, 0.3, 0.1}), g);
  EXPECT_EQ(a.canonicalWord, (std::vector<std::string>{"1", "2", "3", "4"}));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.str(), "(1 2 3 4)");
}

TEST(Dihedral, UnknownLabel) {
  const auto g = SymmetryGroup::trivial({"1", "2", "3", "4"});
  EXPECT_EQ(kind_of([&] { dihedral_classify(points({"1", "2", "3", "x"}, {0.1, 0.3, 0.6, 0.9}), g); }),
            ErrorKind::Domain);
}

TEST(Dihedral, EnumerationDistinctLabels) {
  const std::vector<std::string> labels{"1", "2", "3", "4"};
  const auto g = SymmetryGroup::trivial(labels);
  std::vector<std::string> w = labels;
  std::set<std::vector<std::string>> classes;
  do classes.insert(dihedral_classify(points(w, {0.1, 0.3, 0.6, 0.9}), g).canonicalWord);
  while (std::next_permutation(w.begin(), w.end()));
  EXPECT_EQ(classes.size(), 3u);
  EXPECT_EQ(oracle::count_dihedral_classes(labels, {}), 3u);
}

TEST(Dihedral, EnumerationDefaultBlueprint) {
  std::vector<std::string> w{"D1", "D2", "P1", "P2"};
  std::set<std::vector<std::string>> classes;
  do classes.insert(dihedral_classify(points(w, {0.1, 0.3, 0.6, 0.9}), default_group()).canonicalWord);
  while (std::next_permutation(w.begin(), w.end()));
  EXPECT_EQ(classes.size(), 2u);
  const std::map<std::string, std::string> swap_p{{"P1", "P2"}, {"P2", "P1"}};
  const std::map<std::string, std::string> swap_d{{"D1", "D2"}, {"D2", "D1"}};
  EXPECT_EQ(oracle::count_dihedral_classes({"D1", "D2", "P1", "P2"}, {swap_p, swap_d}), 2u);
}

TEST(DihedralProperty, RotationAndReflectionInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  const std::vector<std::string> labels{"D1", "P1", "D2", "P2"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(4);
    for (auto& x : s) x = u(rng);
    const auto base = dihedral_classify(points(labels, s), default_group());
    const double shift = u(rng);
    std::vector<double> shifted(4), mirrored(4);
    for (std::size_t k = 0; k < 4; ++k) {
      shifted[k] = std::fmod(s[k] + shift, 1.0);
      mirrored[k] = s[k] == 0.0 ? 0.0 : 1.0 - s[k];
    }
    EXPECT_EQ(dihedral_classify(points(labels, shifted), default_group()), base);
    EXPECT_EQ(dihedral_classify(points(labels, mirrored), default_group()), base);
  }
}

TEST(DihedralProperty, RelabelingInvariance) {
  const auto& g = default_group();
  const std::vector<std::string> labels{"D1", "P1", "P2", "D2"};
  const std::vector<double> s{0.05, 0.2, 0.55, 0.8};
  const auto base = dihedral_classify(points(labels, s), g);
  for (std::size_t k = 0; k < g.order(); ++k) {
    std::vector<std::string> image;
    for (const auto& l : labels) image.push_back(g.image(k, l));
    EXPECT_EQ(dihedral_classify(points(image, s), g), base);
  }
}

TEST(Dihedral, ClassSeparationAndModuliConstancy) {
  const auto r = class_of(fixture::R());
  const auto w = class_of(fixture::W());
  EXPECT_NE(r, w);
  EXPECT_EQ(r.str(), "(D1 P1 D2 P2)");
  EXPECT_EQ(w.str(), "(D1 D2 P1 P2)");
  for (int k = 0; k < 20; ++k) {
    const ModuliPoint m(kPi / 3 + (kPi / 6) * k / 19.0);
    EXPECT_EQ(class_of(build_tight(default_blueprint(), rotor_order(), m)), r);
    EXPECT_EQ(class_of(build_tight(default_blueprint(), wing_order(), m)), w);
  }
}

TEST(Gordian, RotorVersusWing) {
  const auto cert = gordian_certify(fixture::R(), fixture::W());
  EXPECT_EQ(cert.verdict, GordianVerdict::Gordian);
  EXPECT_TRUE(cert.blueprintsMatch);
  EXPECT_EQ(cert.symmetryOrder, 4u);
  EXPECT_FALSE(cert.premises.empty());
  ASSERT_TRUE(cert.a.dihedral && cert.b.dihedral);
  EXPECT_NE(*cert.a.dihedral, *cert.b.dihedral);
}

TEST(Gordian, RotatedRotorIsNotDistinguished) {
  const auto rotated = fixture::R().transformed(Similarity::rotation_about(Vec3::UnitZ(), kPi / 2));
  EXPECT_EQ(gordian_certify(fixture::R(), rotated).verdict, GordianVerdict::NotDistinguished);
}

TEST(Gordian, ScaledIsNotTight) {
  const auto scaled = fixture::R().transformed(Similarity::scaling(1.1));
  EXPECT_EQ(gordian_certify(fixture::R(), scaled).verdict, GordianVerdict::NotTight);
}

TEST(Gordian, BlueprintMismatch) {
  EXPECT_EQ(gordian_certify(fixture::R(), build_hopf_pair()).verdict, GordianVerdict::BlueprintMismatch);
}

TEST(Gordian, EarOffArc) {
  auto layout = canonical_layout(default_blueprint(), wing_order(), ModuliPoint::square());
  layout.ears[2].arclength = kPi / 2 + 2.0 + kPi / 2 + 1.0;
  auto cfg = realize(layout);
  cfg.tight = true;
  const auto cert = gordian_certify(fixture::R(), cfg);
  ASSERT_EQ(cert.b.tightness.verdict, TightnessVerdict::GloballyMinimal);
  EXPECT_EQ(cert.verdict, GordianVerdict::NotOnArc);
}
