#include "gordian/clearance.hpp"

#include <algorithm>
#include <cmath>

#include "gordian/error.hpp"

namespace gordian {

SegmentClosest closest_points(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  // Ericson, Real-Time Collision Detection 5.1.9, with clamping of both parameters.
  const Vec3 d1 = a1 - a0;
  const Vec3 d2 = b1 - b0;
  const Vec3 r = a0 - b0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  constexpr double kTiny = 1e-300;

  double s = 0.0;
  double t = 0.0;
  if (a <= kTiny && e <= kTiny) {
    s = t = 0.0;
  } else if (a <= kTiny) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kTiny) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 1e-14 * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  SegmentClosest out;
  out.s = s;
  out.t = t;
  out.pointA = a0 + s * d1;
  out.pointB = b0 + t * d2;
  out.distance = (out.pointA - out.pointB).norm();
  return out;
}

double segment_distance(const Segment& a, const Segment& b) {
  return closest_points(a.start, a.end, b.start, b.end).distance;
}

namespace {

struct EdgeBall {
  Vec3 mid;
  double half;
};

struct Chunk {
  Vec3 center;
  double radius;
  std::size_t begin;
  std::size_t end;
};

constexpr std::size_t kChunkEdges = 32;

std::vector<EdgeBall> edge_balls(const Polyline& p) {
  std::vector<EdgeBall> out(p.edge_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3& a = p.edge_start(i);
    const Vec3& b = p.edge_end(i);
    out[i] = {0.5 * (a + b), 0.5 * (b - a).norm()};
  }
  return out;
}

std::vector<Chunk> chunks(const Polyline& p) {
  std::vector<Chunk> out;
  const std::size_t n = p.edge_count();
  for (std::size_t begin = 0; begin < n; begin += kChunkEdges) {
    const std::size_t end = std::min(n, begin + kChunkEdges);
    Vec3 lo = p.edge_start(begin);
    Vec3 hi = lo;
    for (std::size_t i = begin; i < end; ++i) {
      lo = lo.cwiseMin(p.edge_end(i));
      hi = hi.cwiseMax(p.edge_end(i));
    }
    const Vec3 center = 0.5 * (lo + hi);
    double radius = (p.edge_start(begin) - center).norm();
    for (std::size_t i = begin; i < end; ++i)
      radius = std::max(radius, (p.edge_end(i) - center).norm());
    out.push_back({center, radius, begin, end});
  }
  return out;
}

}  // namespace

PolylineDistance polyline_distance(const Polyline& a, const Polyline& b) {
  PolylineDistance best;
  if (a.edge_count() == 0 || b.edge_count() == 0) return best;
  const auto ea = edge_balls(a);
  const auto eb = edge_balls(b);
  const auto ca = chunks(a);
  const auto cb = chunks(b);

  struct Candidate {
    double lower;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(ca.size() * cb.size());
  for (std::size_t i = 0; i < ca.size(); ++i)
    for (std::size_t j = 0; j < cb.size(); ++j)
      candidates.push_back(
          {(ca[i].center - cb[j].center).norm() - ca[i].radius - cb[j].radius, i, j});
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return x.lower < y.lower || (x.lower == y.lower && (x.i < y.i || (x.i == y.i && x.j < y.j)));
  });

  for (const auto& cand : candidates) {
    if (cand.lower >= best.distance) break;
    const Chunk& x = ca[cand.i];
    const Chunk& y = cb[cand.j];
    for (std::size_t i = x.begin; i < x.end; ++i) {
      for (std::size_t j = y.begin; j < y.end; ++j) {
        if ((ea[i].mid - eb[j].mid).norm() - ea[i].half - eb[j].half >= best.distance) continue;
        const auto c = closest_points(a.edge_start(i), a.edge_end(i), b.edge_start(j), b.edge_end(j));
        if (c.distance < best.distance) {
          best.distance = c.distance;
          best.pointA = c.pointA;
          best.pointB = c.pointB;
          best.edgeA = i;
          best.edgeB = j;
        }
      }
    }
  }
  return best;
}

ClearanceReport gehring_thickness(const LinkConfiguration& config, double max_chord_error) {
  const auto& comps = config.blueprint.components();
  if (comps.size() < 2) fail(ErrorKind::Domain, "Gehring thickness needs at least two components");
  if (!(max_chord_error > 0)) fail(ErrorKind::Domain, "maxChordError must be positive");

  std::vector<Polyline> polys;
  bool any_exact = false;
  ClearanceReport report;
  for (const auto& c : comps) {
    const auto& g = config.at(c.label);
    any_exact = any_exact || is_exact(g);
    polys.push_back(to_polyline(g, max_chord_error));
    for (const auto& p : polys.back().problems())
      fail(ErrorKind::Validation, "component '" + c.label + "': " + p);
    report.labels.push_back(c.label);
  }

  const auto n = static_cast<Eigen::Index>(comps.size());
  report.pairwiseMin = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto d = polyline_distance(polys[static_cast<std::size_t>(i)],
                                       polys[static_cast<std::size_t>(j)]);
      report.pairwiseMin(i, j) = report.pairwiseMin(j, i) = d.distance;
      if (d.distance < report.globalMin) {
        report.globalMin = d.distance;
        report.argmin = {report.labels[static_cast<std::size_t>(i)],
                         report.labels[static_cast<std::size_t>(j)], d.pointA, d.pointB};
      }
    }
  }
  report.errorBound = any_exact ? 2.0 * max_chord_error : 0.0;
  return report;
}

double gehring_ropelength(const LinkConfiguration& config) {
  const double total = config.total_length();
  const double scale = total / (kTwoPi * static_cast<double>(config.blueprint.size()));
  const auto report = gehring_thickness(config, 1e-7 * scale);
  // Within the error bound the true clearance may be zero.
  if (!(report.globalMin > report.errorBound))
    fail(ErrorKind::Degenerate, "Gehring ropelength undefined: components touch or overlap");
  return total / report.globalMin;
}

namespace {

double circumradius(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  const Vec3 a = p1 - p0;
  const Vec3 b = p2 - p1;
  const Vec3 c = p2 - p0;
  const double area2 = a.cross(b).norm();
  if (area2 <= 1e-300) return std::numeric_limits<double>::infinity();
  return a.norm() * b.norm() * c.norm() / (2.0 * area2);
}

// The chord d leaves vertex i normally: incident edges lie on opposite
// sides of the plane through v_i perpendicular to d (90 degree criterion).
bool critical_at(const Polyline& p, std::size_t i, const Vec3& d) {
  const std::size_t n = p.vertices.size();
  const Vec3 prev = p.vertices[i] - p.vertices[(i + n - 1) % n];
  const Vec3 next = p.vertices[(i + 1) % n] - p.vertices[i];
  return prev.dot(d) * next.dot(d) <= 0.0;
}

}  // namespace

double standard_thickness(const Polyline& component, std::span<const Polyline> others) {
  const std::size_t n = component.vertices.size();
  if (n < 3) fail(ErrorKind::Domain, "standard thickness needs at least 3 vertices");
  if (!component.closed) fail(ErrorKind::Domain, "standard thickness needs a closed polyline");

  double result = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    result = std::min(result, circumradius(component.vertices[i], component.vertices[(i + 1) % n],
                                           component.vertices[(i + 2) % n]));
  for (const auto& other : others)
    result = std::min(result, 0.5 * polyline_distance(component, other).distance);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec3 d = component.vertices[j] - component.vertices[i];
      const double half = 0.5 * d.norm();
      if (half >= result) continue;
      if (critical_at(component, i, d) && critical_at(component, j, -d)) result = half;
    }
  }
  return result;
}

}  // namespace gordian
