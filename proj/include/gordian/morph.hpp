#pragma once

// Scheduled deformations of tight-family configurations and the total
// length they pass through.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gordian/config.hpp"
#include "gordian/pimap.hpp"
#include "gordian/relax.hpp"
#include "gordian/tightbuild.hpp"

namespace gordian {

struct HoldMove {};

/// Moves an ear's attachment point along the central curve by `by` (arclength).
struct SlideMove {
  std::string label;
  double by = 0.0;
};

/// Changes the radius an ear keeps around the central curve by `by`; a
/// larger ear lets another ear pass through it.
struct InflateMove {
  std::string label;
  double by = 0.0;
};

/// Rotation about an axis through `about`, then translation. Empty labels
/// means every component.
struct RigidMove {
  std::vector<std::string> labels;
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
  Vec3 about = Vec3::Zero();
  Vec3 translate = Vec3::Zero();
};

using Move = std::variant<HoldMove, SlideMove, InflateMove, RigidMove>;

/// A move runs linearly over [start, end] and stays complete afterwards.
struct ScheduledMove {
  Move move;
  double start = 0.0;
  double end = 1.0;
};

struct MorphSchedule {
  std::vector<ScheduledMove> moves;
  std::size_t frames = 200;

  /// Throws ErrorKind::Validation unless the intervals lie in [0,1], cover
  /// it and frames >= 2.
  void validate() const;
};

struct MorphTrace {
  std::vector<double> times;
  std::vector<double> totalLength;
  std::vector<double> clearance;
  std::vector<bool> linkingOk;
  double maxLength = 0.0;

  /// Every frame has clearance >= 1 - 1e-3 and the blueprint's linking.
  bool valid() const;
};

struct MorphResult {
  MorphTrace trace;
  LinkConfiguration end;
  std::optional<DihedralClass> endClass;
  std::string endClassError;
  /// Frames where the repair pass had to move geometry.
  std::vector<std::size_t> repairedFrames;
};

struct MorphOptions {
  /// Chord error for the per-frame clearance.
  double clearanceChordError = 1e-4;
  std::size_t linkingVertices = 128;
  RelaxParams repair = [] {
    RelaxParams p;
    p.maxIterations = 50;
    p.verticesPerComponent = 256;
    return p;
  }();
};

/// The layout a tight-family configuration was built from, recovered from
/// its metadata (theta and ear order). Throws ErrorKind::Domain when the
/// metadata is missing or the geometry does not match.
TightLayout recover_layout(const LinkConfiguration& config);

/// Runs the schedule frame by frame from `start`. Each frame is realized
/// exactly from the layout parameters, rigid moves are applied, then
/// components closer than the repair target are pushed apart on polylines.
/// Throws ErrorKind::ScheduleInfeasible (naming the frame) when repair
/// cannot restore clearance 1 - 1e-3.
MorphResult run_schedule(const LinkConfiguration& start, const MorphSchedule& schedule,
                         const MorphOptions& options = {});

/// maxLength - baseline. Throws ErrorKind::Domain for an invalid trace.
double excursion(const MorphTrace& trace, double baseline);

/// The ear exchange from the alternating (rotor) order to the adjacent
/// (wing) order on the square central curve: slide two neighbouring ears
/// together onto a straight side, inflate one, pass the other through it,
/// deflate, and slide both to the swapped arc midpoints.
MorphSchedule ear_exchange_schedule(std::size_t frames = 200);

}  // namespace gordian
