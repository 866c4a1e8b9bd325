#pragma once

#include <map>
#include <string>

#include "gordian/config.hpp"
#include "gordian/geom.hpp"
#include "gordian/tightbuild.hpp"

namespace fixture {

using namespace gordian;

inline ArcSegCurve circle(const Vec3& center, const Vec3& u, const Vec3& v, double r) {
  return ArcSegCurve({Arc{PlanarFrame::make(center, u, v), r, 0.0, kTwoPi}});
}

/// Two-component configuration on chain2_blueprint (A, B linked once) or
/// on an unlinked two-component blueprint.
inline LinkConfiguration pair(const ComponentGeometry& a, const ComponentGeometry& b, bool linked = true) {
  LinkConfiguration c;
  c.blueprint = linked ? chain2_blueprint()
                       : LinkBlueprint({{"A", ComponentType::PlainEar}, {"B", ComponentType::PlainEar}}, {});
  c.geometry.emplace("A", a);
  c.geometry.emplace("B", b);
  return c;
}

inline const LinkConfiguration& R() {
  static const LinkConfiguration c = build_tight(default_blueprint(), rotor_order(), ModuliPoint::square());
  return c;
}

inline const LinkConfiguration& W() {
  static const LinkConfiguration c = build_tight(default_blueprint(), wing_order(), ModuliPoint::square());
  return c;
}

inline LinkConfiguration replaced(LinkConfiguration c, const std::string& label, ComponentGeometry g) {
  c.geometry.erase(label);
  c.geometry.emplace(label, std::move(g));
  return c;
}

}  // namespace fixture
