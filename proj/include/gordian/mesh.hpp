#pragma once

// Triangle tube meshes around component curves, written as Wavefront OBJ.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "gordian/config.hpp"

namespace gordian {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;

  /// V - E + F, counting each undirected edge once.
  long euler_characteristic() const;
};

/// Tube of the given radius around a closed polyline, `sides` vertices per
/// ring. Rings follow a rotation-minimizing frame whose closing twist is
/// spread evenly along the curve, so the mesh is a closed torus.
TriangleMesh tube_mesh(const Polyline& centerline, double radius, std::size_t sides);

struct MeshOptions {
  double radius = 0.5;
  double maxChordError = 1e-3;
  std::size_t sides = 24;
};

struct LabeledMesh {
  std::string label;
  TriangleMesh mesh;
};

/// One tube per component. Throws ErrorKind::Domain unless the radius lies
/// in (0, clearance/2].
std::vector<LabeledMesh> tube_meshes(const LinkConfiguration& config, const MeshOptions& options);

void write_obj(std::ostream& out, const std::vector<LabeledMesh>& meshes);

}  // namespace gordian
