#pragma once

// Length lower bounds from the blueprint, the four-disk moduli family, and
// exact construction of tight configurations.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "gordian/config.hpp"
#include "gordian/geom.hpp"

namespace gordian {

/// Minimal convex-hull perimeter of n points in the plane with pairwise
/// distance >= 2 (a degenerate 2-gon counts its segment twice). n in 1..4.
double min_hull_perimeter(int n);

/// 2*pi + min_hull_perimeter(degree): shortest curve at clearance 1 around
/// `degree` other components. degree in 1..4.
double component_lower_bound(int degree);

/// Sum of component_lower_bound over the blueprint's components.
double total_lower_bound(const LinkBlueprint& bp);

/// Rhombus angle of the central curve's four disks, theta in [pi/3, pi/2].
class ModuliPoint {
 public:
  /// Throws ErrorKind::Domain outside [pi/3, pi/2].
  explicit ModuliPoint(double theta);
  static ModuliPoint square() { return ModuliPoint(kPi / 2); }
  static ModuliPoint equilateral() { return ModuliPoint(kPi / 3); }
  double theta() const { return theta_; }

 private:
  double theta_;
};

/// Rhombus of side 2 with angle theta at the first vertex, counter-clockwise,
/// centroid at the origin.
std::array<Vec2, 4> four_disk_centers(const ModuliPoint& m);

/// Offset-hull boundary around the four disks, in the xy-plane.
ArcSegCurve central_curve(const ModuliPoint& m);

/// Where an ear sits on the central curve.
struct EarPlacement {
  std::string label;
  double arclength = 0.0;  // from the start of the central curve, any real
  double inflation = 1.0;  // radius of the disk the ear keeps around the central curve
};

/// A tight-family configuration described by its parameters. Ears hang in
/// the plane normal to the central curve at their attachment point;
/// decorated ears carry their decoration on top (+z).
struct TightLayout {
  LinkBlueprint blueprint;
  double theta = kPi / 2;
  std::vector<EarPlacement> ears;
};

/// Arclength of the midpoint of the central curve's arc around disk k.
double arc_midpoint_arclength(const ArcSegCurve& central, const Vec2& disk_center);

/// Ears in earOrder at the arc midpoints of the disks in counter-clockwise order.
TightLayout canonical_layout(const LinkBlueprint& bp, const std::vector<std::string>& earOrder,
                             const ModuliPoint& m);

/// Exact geometry for a layout. No clearance check.
LinkConfiguration realize(const TightLayout& layout);

/// Boundary of the convex hull of two coplanar disks (frame coordinates),
/// counter-clockwise about frame.n.
ArcSegCurve disk_belt(const PlanarFrame& frame, const Vec2& a, double ra, const Vec2& b, double rb);

/// Tight configuration: central curve around the four disks, ears at the
/// arc midpoints in earOrder. Throws ErrorKind::Domain for a blueprint or
/// order it cannot realize and ErrorKind::Infeasible when the result's
/// clearance falls below 1.
LinkConfiguration build_tight(const LinkBlueprint& bp, const std::vector<std::string>& earOrder,
                              const ModuliPoint& m);

/// Tight Hopf pair on chain2_blueprint(): unit circles through each other's centers.
LinkConfiguration build_hopf_pair();

/// The two canonical orders around the central component.
std::vector<std::string> rotor_order();  // D1, P1, D2, P2 (alternating)
std::vector<std::string> wing_order();   // D1, D2, P1, P2 (adjacent)

enum class TightnessVerdict { GloballyMinimal, NotTight, Invalid };
const char* to_string(TightnessVerdict v);

struct ComponentBound {
  double lowerBound = 0.0;
  double achieved = 0.0;
};

struct TightnessCertificate {
  std::map<std::string, ComponentBound> perComponent;
  double totalLowerBound = 0.0;
  double totalAchieved = 0.0;
  double clearance = 0.0;
  double clearanceErrorBound = 0.0;
  bool linkingOk = false;
  TightnessVerdict verdict = TightnessVerdict::Invalid;
  std::vector<std::string> notes;
};

struct CertifyOptions {
  double maxChordError = 2.5e-7;
  double clearanceTol = 1e-6;
  double lengthRelTol = 1e-9;
  std::size_t linkingVertices = 256;
};

TightnessCertificate certify_tight(const LinkConfiguration& config,
                                   const CertifyOptions& options = {});

}  // namespace gordian
