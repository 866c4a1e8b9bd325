#pragma once

// The attachment map from tight configurations to four points on the
// central curve, dihedral classification of those points, and the Gordian
// certificate built on top of them.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gordian/config.hpp"
#include "gordian/linkmodel.hpp"
#include "gordian/tightbuild.hpp"

namespace gordian {

struct CirclePoint {
  std::string label;
  double s = 0.0;  // arclength fraction on the central curve, [0,1)
};

/// Four labeled points on a circle, sorted by fraction.
class CirclePoints4 {
 public:
  /// Throws ErrorKind::Degenerate when two fractions coincide.
  explicit CirclePoints4(std::array<CirclePoint, 4> entries);
  const std::array<CirclePoint, 4>& entries() const { return entries_; }
  std::vector<std::string> labels() const;

 private:
  std::array<CirclePoint, 4> entries_;
};

struct PiMapOptions {
  /// Largest allowed distance of a neighbour's points from its fitted plane,
  /// relative to the neighbour's diameter.
  double planarityTol = 1e-9;
  std::size_t centralSamples = 4096;
  double bisectionTol = 1e-10;
  /// Crossings flatter than this (radians) are ill-conditioned.
  double minCrossingAngle = 1e-3;
  /// Discretization of exact neighbours when testing region membership.
  double regionChordError = 1e-6;
};

/// For each of the four components linking the central one, the unique
/// point where the central curve crosses that component's planar spanning
/// region. Throws ErrorKind::Domain when the configuration has no central
/// component of degree 4 or a neighbour is not planar, ErrorKind::NonGeneric
/// for zero or several crossings, ErrorKind::IllConditioned for a near
/// tangential crossing.
CirclePoints4 pi_map(const LinkConfiguration& config, const PiMapOptions& options = {});

struct ArcPlacement {
  std::string label;
  double s = 0.0;
  std::size_t pieceIndex = 0;
  bool onArc = false;
};

struct OnArcReport {
  bool ok = false;
  std::vector<ArcPlacement> placements;
  std::string note;
};

/// Whether every attachment point lies on a circular arc of the central
/// curve (arc endpoints included). Requires an exact central curve.
OnArcReport on_arc_check(const LinkConfiguration& config, const PiMapOptions& options = {});

struct DihedralClass {
  /// Lexicographically smallest label word over rotations, reflection and
  /// the symmetry group's relabelings.
  std::vector<std::string> canonicalWord;
  /// Component types along canonicalWord, when a blueprint was supplied.
  std::vector<std::string> typeWord;

  std::string str() const;
  bool operator==(const DihedralClass& o) const { return canonicalWord == o.canonicalWord; }
};

/// Throws ErrorKind::Degenerate for coinciding fractions and ErrorKind::Domain
/// for labels the group does not know.
DihedralClass dihedral_classify(const CirclePoints4& points, const SymmetryGroup& sym,
                                const LinkBlueprint* bp = nullptr);

enum class GordianVerdict {
  Gordian,
  BlueprintMismatch,
  NotTight,
  PiMapFailed,
  NotOnArc,
  NotDistinguished,
};
const char* to_string(GordianVerdict v);

struct GordianSide {
  TightnessCertificate tightness;
  std::optional<CirclePoints4> points;
  std::optional<OnArcReport> onArc;
  std::optional<DihedralClass> dihedral;
  std::string piMapError;
};

struct GordianCertificate {
  GordianVerdict verdict = GordianVerdict::NotDistinguished;
  std::vector<std::string> reasons;
  bool blueprintsMatch = false;
  std::size_t symmetryOrder = 0;
  GordianSide a;
  GordianSide b;
  CertifyOptions tolerances;
  /// Facts the verdict relies on without checking them.
  std::vector<std::string> premises;
};

GordianCertificate gordian_certify(const LinkConfiguration& a, const LinkConfiguration& b,
                                   const CertifyOptions& tolerances = {});

}  // namespace gordian
