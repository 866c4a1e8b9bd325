#include "gordian/tightbuild.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gordian/clearance.hpp"
#include "gordian/error.hpp"
#include "gordian/linkmodel.hpp"

namespace gordian {

double min_hull_perimeter(int n) {
  switch (n) {
    case 1: return 0.0;
    case 2: return 4.0;  // segment of length 2, boundary traversed twice
    case 3: return 6.0;  // equilateral triangle of side 2
    case 4: return 8.0;  // any rhombus of side 2 with angle in [60, 90] degrees
    default: break;
  }
  fail(ErrorKind::Domain, "min_hull_perimeter: n must be in 1..4, got " + std::to_string(n));
}

double component_lower_bound(int degree) {
  if (degree < 1 || degree > 4)
    fail(ErrorKind::Domain,
         "component_lower_bound: degree must be in 1..4, got " + std::to_string(degree));
  return kTwoPi + min_hull_perimeter(degree);
}

double total_lower_bound(const LinkBlueprint& bp) {
  double total = 0.0;
  for (const auto& c : bp.components())
    total += component_lower_bound(static_cast<int>(bp.degree(c.label)));
  return total;
}

ModuliPoint::ModuliPoint(double theta) : theta_(theta) {
  // Endpoints are accepted with a few ulps of slack so that pi/3 and pi/2
  // computed by callers always qualify.
  constexpr double kSlack = 1e-12;
  if (!(theta >= kPi / 3 - kSlack && theta <= kPi / 2 + kSlack)) {
    std::ostringstream msg;
    msg << "rhombus angle " << theta << " outside [pi/3, pi/2]";
    fail(ErrorKind::Domain, msg.str());
  }
}

std::array<Vec2, 4> four_disk_centers(const ModuliPoint& m) {
  const double t = m.theta();
  const Vec2 side0(2.0, 0.0);
  const Vec2 side1(2.0 * std::cos(t), 2.0 * std::sin(t));
  std::array<Vec2, 4> v = {Vec2(0, 0), side0, side0 + side1, side1};
  const Vec2 centroid = 0.25 * (v[0] + v[1] + v[2] + v[3]);
  for (auto& p : v) p -= centroid;
  // Exact square coordinates for the canonical case.
  if (t == kPi / 2) v = {Vec2(-1, -1), Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1)};
  return v;
}

ArcSegCurve central_curve(const ModuliPoint& m) {
  const auto centers = four_disk_centers(m);
  return offset_hull_boundary(PlanarFrame{}, centers, 1.0);
}

double arc_midpoint_arclength(const ArcSegCurve& central, const Vec2& disk_center) {
  const auto fractions = central.boundary_fractions();
  const double total = central.length();
  const Vec3 target(disk_center.x(), disk_center.y(), 0.0);
  for (std::size_t i = 0; i < central.pieces().size(); ++i) {
    const auto* arc = std::get_if<Arc>(&central.pieces()[i]);
    if (!arc || (arc->frame.origin - target).norm() > 1e-9) continue;
    return total * 0.5 * (fractions[i] + fractions[i + 1]);
  }
  fail(ErrorKind::Domain, "central curve has no arc around the requested disk");
}

std::vector<std::string> rotor_order() { return {"D1", "P1", "D2", "P2"}; }
std::vector<std::string> wing_order() { return {"D1", "D2", "P1", "P2"}; }

namespace {

struct LayoutShape {
  std::string central;
  std::map<std::string, std::string> decorationOf;  // decorated ear -> decoration
};

LayoutShape check_shape(const LinkBlueprint& bp, const std::vector<std::string>& ears) {
  LayoutShape shape;
  const auto central = bp.central_label();
  if (!central) fail(ErrorKind::Domain, "blueprint needs exactly one central component");
  shape.central = *central;
  const auto neighbors = bp.neighbors(shape.central);
  if (neighbors.size() != 4)
    fail(ErrorKind::Domain, "central component must link exactly 4 components, links " +
                                std::to_string(neighbors.size()));
  std::set<std::string> want(neighbors.begin(), neighbors.end());
  std::set<std::string> got(ears.begin(), ears.end());
  if (ears.size() != 4 || got != want)
    fail(ErrorKind::Domain, "ear order must be a permutation of the central component's neighbours");

  std::size_t placed = 1 + ears.size();
  for (const auto& ear : ears) {
    const auto type = bp.type_of(ear);
    const auto nb = bp.neighbors(ear);
    if (type == ComponentType::PlainEar) {
      if (nb.size() != 1) fail(ErrorKind::Domain, "plain ear '" + ear + "' must link only the central component");
    } else if (type == ComponentType::DecoratedEar) {
      std::vector<std::string> decorations;
      for (const auto& x : nb)
        if (x != shape.central) decorations.push_back(x);
      if (decorations.size() != 1 || bp.type_of(decorations[0]) != ComponentType::Decoration ||
          bp.degree(decorations[0]) != 1)
        fail(ErrorKind::Domain, "decorated ear '" + ear + "' must carry exactly one decoration");
      shape.decorationOf[ear] = decorations[0];
      ++placed;
    } else {
      fail(ErrorKind::Domain, "component '" + ear + "' linking the central component must be an ear");
    }
  }
  if (placed != bp.size())
    fail(ErrorKind::Domain, "blueprint has components the tight layout cannot place");
  return shape;
}

double wrap(double s, double period) {
  double r = std::fmod(s, period);
  if (r < 0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

}  // namespace

ArcSegCurve disk_belt(const PlanarFrame& frame, const Vec2& a, double ra, const Vec2& b, double rb) {
  const double dist = (b - a).norm();
  if (!(dist > std::abs(ra - rb) + 1e-12) || !(ra > 0) || !(rb > 0))
    fail(ErrorKind::Validation, "disk belt needs two positive disks, neither containing the other");
  const Vec2 e = (b - a) / dist;
  const Vec2 ep(-e.y(), e.x());
  const double sin_a = (ra - rb) / dist;
  const double cos_a = std::sqrt(std::max(0.0, 1.0 - sin_a * sin_a));
  const double alpha = std::asin(sin_a);
  const Vec2 right = sin_a * e - cos_a * ep;
  const Vec2 left = sin_a * e + cos_a * ep;
  std::vector<CurvePiece> pieces;
  pieces.emplace_back(Segment{frame.lift(a + ra * right), frame.lift(b + rb * right)});
  pieces.emplace_back(Arc{frame.at(frame.lift(b)), rb, std::atan2(right.y(), right.x()), kPi - 2 * alpha});
  pieces.emplace_back(Segment{frame.lift(b + rb * left), frame.lift(a + ra * left)});
  pieces.emplace_back(Arc{frame.at(frame.lift(a)), ra, std::atan2(left.y(), left.x()), kPi + 2 * alpha});
  return ArcSegCurve(std::move(pieces));
}

TightLayout canonical_layout(const LinkBlueprint& bp, const std::vector<std::string>& earOrder,
                             const ModuliPoint& m) {
  check_shape(bp, earOrder);
  const auto centers = four_disk_centers(m);
  const auto central = central_curve(m);
  TightLayout layout{bp, m.theta(), {}};
  for (std::size_t k = 0; k < 4; ++k)
    layout.ears.push_back({earOrder[k], arc_midpoint_arclength(central, centers[k]), 1.0});
  return layout;
}

LinkConfiguration realize(const TightLayout& layout) {
  std::vector<std::string> labels;
  for (const auto& e : layout.ears) labels.push_back(e.label);
  const auto shape = check_shape(layout.blueprint, labels);
  const ModuliPoint m(layout.theta);
  const auto central = central_curve(m);
  const double total = central.length();
  const Vec3 z = Vec3::UnitZ();

  LinkConfiguration config;
  config.blueprint = layout.blueprint;
  config.geometry.emplace(shape.central, central);
  config.metadata.theta = layout.theta;
  config.metadata.earOrder = labels;

  for (const auto& ear : layout.ears) {
    if (!(ear.inflation >= 1.0))
      fail(ErrorKind::Domain, "ear '" + ear.label + "' inflation must be at least 1");
    const double s = wrap(ear.arclength, total) / total;
    const Vec3 c = central.point_at(s);
    const Vec3 tangent = central.tangent_at(s);
    const Vec3 inward = z.cross(tangent);
    // The central curve crosses this frame's plane along +n = tangent.
    const PlanarFrame normal_plane{c, inward, z, inward.cross(z)};
    const double rho = ear.inflation;
    if (layout.blueprint.type_of(ear.label) == ComponentType::PlainEar) {
      config.geometry.emplace(ear.label,
                              ArcSegCurve({Arc{normal_plane, rho, -kPi / 2, kTwoPi}}));
      continue;
    }
    config.geometry.emplace(ear.label,
                            disk_belt(normal_plane, Vec2(0, 0), rho, Vec2(0, rho + 1), 1.0));
    // The decoration is centered on the top of the ear and passes through
    // the center of the ear's upper disk.
    const PlanarFrame deco_plane{c + (rho + 2) * z, tangent, z, tangent.cross(z)};
    config.geometry.emplace(shape.decorationOf.at(ear.label),
                            ArcSegCurve({Arc{deco_plane, 1.0, -kPi / 2, kTwoPi}}));
  }
  return config;
}

LinkConfiguration build_tight(const LinkBlueprint& bp, const std::vector<std::string>& earOrder,
                              const ModuliPoint& m) {
  auto config = realize(canonical_layout(bp, earOrder, m));
  constexpr double kChord = 1e-5;
  const auto clearance = gehring_thickness(config, kChord);
  if (clearance.globalMin < 1.0 - 1e-6 - clearance.errorBound) {
    std::ostringstream msg;
    msg << "construction infeasible: clearance " << clearance.globalMin << " between "
        << clearance.argmin.labelA << " and " << clearance.argmin.labelB;
    fail(ErrorKind::Infeasible, msg.str());
  }
  config.tight = true;
  config.metadata.provenance = "build_tight";
  return config;
}

LinkConfiguration build_hopf_pair() {
  LinkConfiguration config;
  config.blueprint = chain2_blueprint();
  config.geometry.emplace("A", ArcSegCurve({Arc{PlanarFrame{}, 1.0, 0.0, kTwoPi}}));
  const PlanarFrame xz{Vec3(1, 0, 0), Vec3::UnitX(), -Vec3::UnitZ(), Vec3::UnitY()};
  config.geometry.emplace("B", ArcSegCurve({Arc{xz, 1.0, 0.0, kTwoPi}}));
  config.tight = true;
  config.metadata.name = "hopf2";
  config.metadata.provenance = "build_hopf_pair";
  return config;
}

// ---------------------------------------------------------------------------

const char* to_string(TightnessVerdict v) {
  switch (v) {
    case TightnessVerdict::GloballyMinimal: return "globallyMinimal";
    case TightnessVerdict::NotTight: return "notTight";
    case TightnessVerdict::Invalid: return "invalid";
  }
  return "?";
}

TightnessCertificate certify_tight(const LinkConfiguration& config, const CertifyOptions& options) {
  TightnessCertificate cert;
  bool invalid = false;
  const auto& bp = config.blueprint;

  for (const auto& c : bp.components()) {
    ComponentBound b;
    const auto degree = static_cast<int>(bp.degree(c.label));
    if (degree >= 1 && degree <= 4) {
      b.lowerBound = component_lower_bound(degree);
    } else {
      cert.notes.push_back("component " + c.label + " has degree " + std::to_string(degree) +
                           " outside 1..4");
      invalid = true;
    }
    auto it = config.geometry.find(c.label);
    if (it == config.geometry.end()) {
      cert.notes.push_back("component " + c.label + " has no geometry");
      invalid = true;
    } else if (const auto problems = geometry_problems(it->second); !problems.empty()) {
      cert.notes.push_back("component " + c.label + ": " + problems.front());
      invalid = true;
    } else {
      b.achieved = geometry_length(it->second);
    }
    cert.perComponent[c.label] = b;
    cert.totalLowerBound += b.lowerBound;
    cert.totalAchieved += b.achieved;
  }
  if (invalid || bp.size() < 2) {
    if (bp.size() < 2) cert.notes.push_back("fewer than two components");
    cert.verdict = TightnessVerdict::Invalid;
    return cert;
  }

  const auto clearance = gehring_thickness(config, options.maxChordError);
  cert.clearance = clearance.globalMin;
  cert.clearanceErrorBound = clearance.errorBound;
  if (cert.clearance < 1.0 - options.clearanceTol) {
    std::ostringstream msg;
    msg << "clearance " << cert.clearance << " below 1 between " << clearance.argmin.labelA
        << " and " << clearance.argmin.labelB;
    cert.notes.push_back(msg.str());
    invalid = true;
  }

  try {
    const auto lk = linking_matrix(config, options.linkingVertices);
    cert.linkingOk = lk.values == bp.linking_matrix();
    if (!cert.linkingOk) cert.notes.push_back("realized linking matrix differs from the blueprint");
  } catch (const Error& e) {
    cert.linkingOk = false;
    cert.notes.push_back(e.what());
  }
  invalid = invalid || !cert.linkingOk;

  if (invalid) {
    cert.verdict = TightnessVerdict::Invalid;
  } else if (cert.totalAchieved <= cert.totalLowerBound * (1.0 + options.lengthRelTol)) {
    cert.verdict = TightnessVerdict::GloballyMinimal;
  } else {
    std::ostringstream msg;
    msg << "total length " << cert.totalAchieved << " exceeds the class lower bound "
        << cert.totalLowerBound;
    cert.notes.push_back(msg.str());
    cert.verdict = TightnessVerdict::NotTight;
  }
  return cert;
}

}  // namespace gordian
