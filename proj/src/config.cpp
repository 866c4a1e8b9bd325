#include "gordian/config.hpp"

#include <algorithm>
#include <set>

#include "gordian/error.hpp"

namespace gordian {

const char* to_string(ComponentType type) {
  switch (type) {
    case ComponentType::Central: return "central";
    case ComponentType::PlainEar: return "plainEar";
    case ComponentType::DecoratedEar: return "decoratedEar";
    case ComponentType::Decoration: return "decoration";
  }
  return "?";
}

std::optional<ComponentType> component_type_from_string(const std::string& s) {
  for (auto t : {ComponentType::Central, ComponentType::PlainEar, ComponentType::DecoratedEar,
                 ComponentType::Decoration})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

LinkBlueprint::LinkBlueprint(std::vector<ComponentSpec> components, std::vector<LinkEdge> edges)
    : components_(std::move(components)), edges_(std::move(edges)) {
  std::set<std::string> labels;
  for (const auto& c : components_) {
    if (c.label.empty()) fail(ErrorKind::Validation, "blueprint: empty component label");
    if (!labels.insert(c.label).second)
      fail(ErrorKind::Validation, "blueprint: duplicate label '" + c.label + "'");
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& e : edges_) {
    if (!labels.count(e.a) || !labels.count(e.b))
      fail(ErrorKind::Validation, "blueprint: edge " + e.a + "-" + e.b + " names unknown label");
    if (e.a == e.b) fail(ErrorKind::Validation, "blueprint: self edge on '" + e.a + "'");
    if (e.multiplicity != 1 && e.multiplicity != -1)
      fail(ErrorKind::Validation, "blueprint: multiplicity of " + e.a + "-" + e.b + " must be +-1");
    auto key = std::minmax(e.a, e.b);
    if (!pairs.insert({key.first, key.second}).second)
      fail(ErrorKind::Validation, "blueprint: duplicate edge " + e.a + "-" + e.b);
  }
}

bool LinkBlueprint::contains(const std::string& label) const {
  return std::any_of(components_.begin(), components_.end(),
                     [&](const ComponentSpec& c) { return c.label == label; });
}

std::size_t LinkBlueprint::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (components_[i].label == label) return i;
  fail(ErrorKind::Domain, "blueprint has no component '" + label + "'");
}

ComponentType LinkBlueprint::type_of(const std::string& label) const {
  return components_[index_of(label)].type;
}

std::size_t LinkBlueprint::degree(const std::string& label) const {
  return neighbors(label).size();
}

std::vector<std::string> LinkBlueprint::neighbors(const std::string& label) const {
  index_of(label);
  std::vector<std::string> out;
  for (const auto& c : components_)
    if (multiplicity(label, c.label) != 0) out.push_back(c.label);
  return out;
}

int LinkBlueprint::multiplicity(const std::string& a, const std::string& b) const {
  for (const auto& e : edges_)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.multiplicity;
  return 0;
}

Eigen::MatrixXi LinkBlueprint::linking_matrix() const {
  const auto n = static_cast<Eigen::Index>(components_.size());
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (const auto& e : edges_) {
    const auto i = static_cast<Eigen::Index>(index_of(e.a));
    const auto j = static_cast<Eigen::Index>(index_of(e.b));
    m(i, j) = m(j, i) = e.multiplicity;
  }
  return m;
}

std::optional<std::string> LinkBlueprint::central_label() const {
  std::optional<std::string> found;
  for (const auto& c : components_) {
    if (c.type != ComponentType::Central) continue;
    if (found) return std::nullopt;
    found = c.label;
  }
  return found;
}

bool LinkBlueprint::operator==(const LinkBlueprint& other) const {
  if (components_.size() != other.components_.size()) return false;
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (components_[i].label != other.components_[i].label ||
        components_[i].type != other.components_[i].type)
      return false;
  return linking_matrix() == other.linking_matrix();
}

LinkBlueprint default_blueprint() {
  using T = ComponentType;
  return LinkBlueprint({{"C", T::Central},
                        {"P1", T::PlainEar},
                        {"P2", T::PlainEar},
                        {"D1", T::DecoratedEar},
                        {"D2", T::DecoratedEar},
                        {"d1", T::Decoration},
                        {"d2", T::Decoration}},
                       {{"C", "P1", 1},
                        {"C", "P2", 1},
                        {"C", "D1", 1},
                        {"C", "D2", 1},
                        {"D1", "d1", 1},
                        {"D2", "d2", 1}});
}

LinkBlueprint star_blueprint() {
  using T = ComponentType;
  return LinkBlueprint(
      {{"C", T::Central}, {"P1", T::PlainEar}, {"P2", T::PlainEar}, {"P3", T::PlainEar},
       {"P4", T::PlainEar}},
      {{"C", "P1", 1}, {"C", "P2", 1}, {"C", "P3", 1}, {"C", "P4", 1}});
}

LinkBlueprint chain2_blueprint() {
  using T = ComponentType;
  return LinkBlueprint({{"A", T::PlainEar}, {"B", T::PlainEar}}, {{"A", "B", 1}});
}

// ---------------------------------------------------------------------------

double geometry_length(const ComponentGeometry& g) {
  return std::visit([](const auto& c) { return c.length(); }, g);
}

bool is_exact(const ComponentGeometry& g) { return std::holds_alternative<ArcSegCurve>(g); }

std::vector<std::string> geometry_problems(const ComponentGeometry& g) {
  if (const auto* c = std::get_if<ArcSegCurve>(&g)) return c->problems();
  return std::get<Polyline>(g).problems();
}

Polyline to_polyline(const ComponentGeometry& g, double max_chord_error) {
  if (const auto* c = std::get_if<ArcSegCurve>(&g)) return discretize(*c, max_chord_error);
  return std::get<Polyline>(g);
}

Polyline to_polyline_sampled(const ComponentGeometry& g, std::size_t n) {
  if (const auto* c = std::get_if<ArcSegCurve>(&g)) return sample_uniform(*c, n);
  return std::get<Polyline>(g);
}

ComponentGeometry transform_geometry(const ComponentGeometry& g, const Similarity& t) {
  return std::visit([&](const auto& c) -> ComponentGeometry { return c.transformed(t); }, g);
}

const ComponentGeometry& LinkConfiguration::at(const std::string& label) const {
  auto it = geometry.find(label);
  if (it == geometry.end()) fail(ErrorKind::Validation, "no geometry for component '" + label + "'");
  return it->second;
}

double LinkConfiguration::total_length() const {
  double total = 0.0;
  for (const auto& c : blueprint.components()) total += geometry_length(at(c.label));
  return total;
}

LinkConfiguration LinkConfiguration::transformed(const Similarity& t) const {
  LinkConfiguration out = *this;
  for (auto& [label, g] : out.geometry) g = transform_geometry(g, t);
  return out;
}

}  // namespace gordian
