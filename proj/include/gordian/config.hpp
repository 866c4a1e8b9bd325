#pragma once

// Link blueprints (which component links which) and link configurations
// (a blueprint plus one curve per component).

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gordian/geom.hpp"

namespace gordian {

enum class ComponentType { Central, PlainEar, DecoratedEar, Decoration };

const char* to_string(ComponentType type);
/// Parses "central", "plainEar", "decoratedEar", "decoration".
std::optional<ComponentType> component_type_from_string(const std::string& s);

struct ComponentSpec {
  std::string label;
  ComponentType type = ComponentType::PlainEar;
};

struct LinkEdge {
  std::string a;
  std::string b;
  int multiplicity = 1;
};

class LinkBlueprint {
 public:
  LinkBlueprint() = default;
  /// Throws ErrorKind::Validation on duplicate labels, self edges,
  /// duplicate pairs, unknown labels or multiplicities other than +-1.
  LinkBlueprint(std::vector<ComponentSpec> components, std::vector<LinkEdge> edges);

  const std::vector<ComponentSpec>& components() const { return components_; }
  const std::vector<LinkEdge>& edges() const { return edges_; }
  std::size_t size() const { return components_.size(); }

  bool contains(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;
  ComponentType type_of(const std::string& label) const;
  std::size_t degree(const std::string& label) const;
  /// Neighbours in component order.
  std::vector<std::string> neighbors(const std::string& label) const;
  /// Linking multiplicity between two labels, 0 when not an edge.
  int multiplicity(const std::string& a, const std::string& b) const;
  /// Symmetric matrix in component order.
  Eigen::MatrixXi linking_matrix() const;
  /// Label of the unique central component, if exactly one exists.
  std::optional<std::string> central_label() const;

  bool operator==(const LinkBlueprint& other) const;

 private:
  std::vector<ComponentSpec> components_;
  std::vector<LinkEdge> edges_;
};

/// C central; P1, P2 plain ears; D1, D2 decorated ears; d1, d2 decorations.
LinkBlueprint default_blueprint();
/// C central with four plain ears P1..P4.
LinkBlueprint star_blueprint();
/// Two singly linked components A, B.
LinkBlueprint chain2_blueprint();

using ComponentGeometry = std::variant<ArcSegCurve, Polyline>;

double geometry_length(const ComponentGeometry& g);
bool is_exact(const ComponentGeometry& g);
std::vector<std::string> geometry_problems(const ComponentGeometry& g);
/// Exact curves are discretized with max_chord_error; polylines pass through.
Polyline to_polyline(const ComponentGeometry& g, double max_chord_error);
/// Exact curves are sampled at n uniform arclength fractions; polylines pass through.
Polyline to_polyline_sampled(const ComponentGeometry& g, std::size_t n);
ComponentGeometry transform_geometry(const ComponentGeometry& g, const Similarity& t);

struct ConfigMetadata {
  std::string name;
  std::optional<double> theta;
  std::vector<std::string> earOrder;
  std::string provenance;
};

struct LinkConfiguration {
  LinkBlueprint blueprint;
  std::map<std::string, ComponentGeometry> geometry;
  bool tight = false;
  ConfigMetadata metadata;

  /// Throws ErrorKind::Validation when the label has no geometry.
  const ComponentGeometry& at(const std::string& label) const;
  double total_length() const;
  LinkConfiguration transformed(const Similarity& t) const;
};

}  // namespace gordian
