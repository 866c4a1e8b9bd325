#pragma once

// Realized linking numbers, configuration validation and blueprint
// symmetry groups.

#include <Eigen/Core>

#include <string>
#include <vector>

#include "gordian/config.hpp"

namespace gordian {

struct LinkingResult {
  int value = 0;
  double raw = 0.0;       // Gauss sum before rounding
  double residual = 0.0;  // |raw - value|
};

/// Gauss double sum raw value using the exact solid angle subtended by each
/// pair of edges. No clearance check.
double gauss_linking_sum(const Polyline& a, const Polyline& b);

/// Rounded Gauss linking number. Throws ErrorKind::IllConditioned when
/// the polylines come closer than 1e-6.
LinkingResult linking_number(const Polyline& a, const Polyline& b);

struct LinkingMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXi values;
  double maxResidual = 0.0;
};

/// Pairwise linking numbers in blueprint order. Exact curves are sampled at
/// vertices_per_component uniform points; polylines are used as given.
/// Pairs with disjoint bounding boxes are unlinked without summation.
LinkingMatrix linking_matrix(const LinkConfiguration& config, std::size_t vertices_per_component);

/// Same for bare polylines (no clearance check).
Eigen::MatrixXi linking_matrix(const std::vector<Polyline>& polys, double* max_residual = nullptr);

enum class ViolationCategory { MissingGeometry, UnknownGeometry, Geometry, Clearance, Linking };

const char* to_string(ViolationCategory c);

struct Violation {
  ViolationCategory category;
  std::vector<std::string> labels;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(ViolationCategory c) const;
};

struct ValidateOptions {
  double maxChordError = 2.5e-7;
  double clearanceTol = 1e-6;
  std::size_t linkingVertices = 256;
};

/// Checks geometry invariants, clearance >= 1 - tol when the tight flag is
/// set, and the realized linking matrix against the blueprint.
ValidationReport validate(const LinkConfiguration& config, const ValidateOptions& options = {});

/// Label permutations preserving types and the signed edge set.
class SymmetryGroup {
 public:
  SymmetryGroup(std::vector<std::string> labels, std::vector<std::vector<std::size_t>> perms);

  static SymmetryGroup trivial(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<std::size_t>>& permutations() const { return perms_; }
  std::size_t order() const { return perms_.size(); }
  /// Image of a label under element k.
  const std::string& image(std::size_t k, const std::string& label) const;
  /// Identity present and closed under composition and inverse.
  bool satisfies_group_axioms() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> perms_;
};

inline constexpr std::size_t kMaxAutomorphismComponents = 10;

/// Brute force over all label permutations. Throws ErrorKind::Capacity
/// above kMaxAutomorphismComponents components.
SymmetryGroup blueprint_automorphisms(const LinkBlueprint& bp);

}  // namespace gordian
