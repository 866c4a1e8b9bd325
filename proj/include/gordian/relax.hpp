#pragma once

// Length descent on polyline configurations under a clearance constraint.

#include <cstdint>
#include <vector>

#include "gordian/config.hpp"

namespace gordian {

struct RelaxParams {
  /// Cap on the per-vertex gradient step; the step is also limited to 0.4
  /// times the shorter adjacent edge so the explicit scheme stays stable.
  double stepSize = 0.02;
  std::size_t maxIterations = 20000;
  double clearanceTarget = 1.0;
  /// Fraction of a clearance deficit removed by one projection.
  double penaltyWeight = 1.0;
  std::size_t resampleEvery = 20;
  /// Relative length change between two resamples that counts as converged.
  double convergenceTol = 1e-6;
  /// Vertices used when an exact component is first discretized.
  std::size_t verticesPerComponent = 128;
  /// Projection sweeps per iteration (stops early once nothing overlaps).
  std::size_t projectionPasses = 4;

  /// Throws ErrorKind::Validation for non-positive sizes or tolerances.
  void validate() const;
};

struct RelaxReport {
  std::size_t iterations = 0;
  double finalLength = 0.0;
  double finalClearance = 0.0;
  /// Total length before the first iteration and after each one.
  std::vector<double> lengthHistory;
  bool converged = false;
};

struct RelaxResult {
  RelaxReport report;
  LinkConfiguration config;
};

/// d(length)/d(vertex) for a closed polyline.
std::vector<Vec3> length_gradient(const Polyline& poly);

/// Resample a closed polyline to n vertices evenly spaced in arclength,
/// starting at its first vertex.
Polyline resample_uniform(const Polyline& poly, std::size_t n);

/// Every component as a polyline; exact components are sampled uniformly.
LinkConfiguration as_polylines(const LinkConfiguration& config, std::size_t vertices_per_component);

/// Adds N(0, sigma^2) noise to every coordinate of every vertex. Exact
/// components are sampled first. sigma == 0 returns the input unchanged.
LinkConfiguration perturb(const LinkConfiguration& config, double sigma, std::uint64_t seed,
                          std::size_t vertices_per_component = 128);

/// Shortens the configuration while pushing components at least
/// clearanceTarget apart. Throws ErrorKind::Validation for a bad start,
/// ErrorKind::RelaxationFailed when the linking matrix leaves the blueprint
/// and ErrorKind::Numerical (with the iteration) on NaN or runaway steps.
RelaxResult relax(const LinkConfiguration& config, const RelaxParams& params = {});

/// Minimum distance between distinct components, computed on polylines.
double polyline_clearance(const std::vector<Polyline>& polys);

/// Symmetric push-apart of segment pairs from distinct components that are
/// closer than `target`. Runs at most `passes` sweeps; returns the number of
/// corrections made in the last sweep.
std::size_t push_apart(std::vector<Polyline>& polys, double target, double weight,
                       std::size_t passes);

}  // namespace gordian
