#include "gordian/mesh.hpp"

#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "gordian/clearance.hpp"
#include "gordian/error.hpp"

namespace gordian {

long TriangleMesh::euler_characteristic() const {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      const auto a = t[static_cast<std::size_t>(k)];
      const auto b = t[static_cast<std::size_t>((k + 1) % 3)];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  return static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(triangles.size());
}

namespace {

// Double reflection step for a rotation-minimizing frame.
Vec3 transport(const Vec3& x0, const Vec3& t0, const Vec3& x1, const Vec3& t1, const Vec3& r0) {
  const Vec3 v1 = x1 - x0;
  const double c1 = v1.squaredNorm();
  if (c1 == 0) return r0;
  const Vec3 rl = r0 - (2 / c1) * v1.dot(r0) * v1;
  const Vec3 tl = t0 - (2 / c1) * v1.dot(t0) * v1;
  const Vec3 v2 = t1 - tl;
  const double c2 = v2.squaredNorm();
  if (c2 == 0) return rl;
  return rl - (2 / c2) * v2.dot(rl) * v2;
}

}  // namespace

TriangleMesh tube_mesh(const Polyline& centerline, double radius, std::size_t sides) {
  const auto& x = centerline.vertices;
  const std::size_t n = x.size();
  if (!centerline.closed || n < 3) fail(ErrorKind::Domain, "tube mesh needs a closed polyline");
  if (sides < 3) fail(ErrorKind::Domain, "tube mesh needs at least 3 sides");

  // Vertex tangents from the neighbouring edges.
  std::vector<Vec3> tangents(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 in = (x[i] - x[(i + n - 1) % n]).normalized();
    const Vec3 out = (x[(i + 1) % n] - x[i]).normalized();
    Vec3 t = in + out;
    tangents[i] = t.norm() > 1e-12 ? t.normalized() : out;
  }
  std::vector<Vec3> normals(n + 1);
  normals[0] = tangents[0].unitOrthogonal();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    Vec3 r = transport(x[i], tangents[i], x[j], tangents[j], normals[i]);
    normals[i + 1] = (r - r.dot(tangents[j]) * tangents[j]).normalized();
  }
  // Holonomy: angle from the transported frame back to the starting one.
  const Vec3 b0 = tangents[0].cross(normals[0]);
  const double twist = std::atan2(normals[n].dot(b0), normals[n].dot(normals[0]));

  std::vector<double> arc(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) arc[i] = arc[i - 1] + (x[i] - x[i - 1]).norm();
  const double total = arc[n - 1] + (x[0] - x[n - 1]).norm();

  TriangleMesh mesh;
  mesh.vertices.reserve(n * sides);
  for (std::size_t i = 0; i < n; ++i) {
    const double correction = -twist * arc[i] / total;
    const Vec3 b = tangents[i].cross(normals[i]);
    const Vec3 nrm = std::cos(correction) * normals[i] + std::sin(correction) * b;
    const Vec3 bin = tangents[i].cross(nrm);
    for (std::size_t k = 0; k < sides; ++k) {
      const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(sides);
      mesh.vertices.push_back(x[i] + radius * (std::cos(phi) * nrm + std::sin(phi) * bin));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    for (std::size_t k = 0; k < sides; ++k) {
      const std::size_t l = (k + 1) % sides;
      const std::size_t a = i * sides + k, b = i * sides + l, c = j * sides + l, d = j * sides + k;
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  return mesh;
}

std::vector<LabeledMesh> tube_meshes(const LinkConfiguration& config, const MeshOptions& options) {
  if (!(options.radius > 0)) fail(ErrorKind::Domain, "tube radius must be positive");
  if (config.blueprint.size() >= 2) {
    const auto clearance = gehring_thickness(config, options.maxChordError * 1e-3);
    const double limit = 0.5 * (clearance.globalMin + clearance.errorBound);
    if (options.radius > limit + 1e-12) {
      std::ostringstream msg;
      msg << "tube radius " << options.radius << " exceeds half the clearance "
          << clearance.globalMin << " (between " << clearance.argmin.labelA << " and "
          << clearance.argmin.labelB << ")";
      fail(ErrorKind::Domain, msg.str());
    }
  }
  std::vector<LabeledMesh> out;
  for (const auto& c : config.blueprint.components())
    out.push_back({c.label, tube_mesh(to_polyline(config.at(c.label), options.maxChordError),
                                      options.radius, options.sides)});
  return out;
}

void write_obj(std::ostream& out, const std::vector<LabeledMesh>& meshes) {
  out.precision(12);
  std::size_t offset = 1;
  for (const auto& m : meshes) {
    out << "o " << m.label << "\n";
    for (const auto& v : m.mesh.vertices) out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : m.mesh.triangles)
      out << "f " << t[0] + offset << " " << t[1] + offset << " " << t[2] + offset << "\n";
    offset += m.mesh.vertices.size();
  }
}

}  // namespace gordian
