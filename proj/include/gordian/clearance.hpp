#pragma once

// Inter-component distances: Gehring clearance, Gehring ropelength and a
// vertex-based standard thickness for polylines.

#include <Eigen/Core>

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gordian/config.hpp"
#include "gordian/geom.hpp"

namespace gordian {

struct SegmentClosest {
  double distance = 0.0;
  double s = 0.0;  // parameter on the first segment
  double t = 0.0;  // parameter on the second segment
  Vec3 pointA = Vec3::Zero();
  Vec3 pointB = Vec3::Zero();
};

/// Closest points between closed segments [a0,a1] and [b0,b1].
SegmentClosest closest_points(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

/// Exact minimum distance between two closed segments.
double segment_distance(const Segment& a, const Segment& b);

struct PolylineDistance {
  double distance = std::numeric_limits<double>::infinity();
  Vec3 pointA = Vec3::Zero();
  Vec3 pointB = Vec3::Zero();
  std::size_t edgeA = 0;
  std::size_t edgeB = 0;
};

/// Minimum distance between two polylines. Branch and bound over chunks
/// of consecutive edges; exact up to floating point.
PolylineDistance polyline_distance(const Polyline& a, const Polyline& b);

struct ClearanceWitness {
  std::string labelA;
  std::string labelB;
  Vec3 pointA = Vec3::Zero();
  Vec3 pointB = Vec3::Zero();
};

struct ClearanceReport {
  std::vector<std::string> labels;  // blueprint order
  Eigen::MatrixXd pairwiseMin;      // diagonal is +inf (self distance excluded)
  double globalMin = std::numeric_limits<double>::infinity();
  ClearanceWitness argmin;
  /// |reported - true clearance| <= errorBound (twice the chord error for
  /// exact curves, 0 between polylines).
  double errorBound = 0.0;
};

/// Minimum distance between points of distinct components.
ClearanceReport gehring_thickness(const LinkConfiguration& config, double max_chord_error);

/// Total length over Gehring thickness. The chord error is chosen
/// relative to the configuration's size, so the value is scale invariant.
double gehring_ropelength(const LinkConfiguration& config);

/// min(smallest circumradius of consecutive vertex triples,
///     half the distance to every other component,
///     half the smallest doubly critical self distance between vertices).
double standard_thickness(const Polyline& component, std::span<const Polyline> others);

}  // namespace gordian
