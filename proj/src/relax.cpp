#include "gordian/relax.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include "gordian/clearance.hpp"
#include "gordian/error.hpp"
#include "gordian/linkmodel.hpp"

namespace gordian {

void RelaxParams::validate() const {
  if (!(stepSize > 0)) fail(ErrorKind::Validation, "stepSize must be positive");
  if (!(clearanceTarget > 0)) fail(ErrorKind::Validation, "clearanceTarget must be positive");
  if (!(convergenceTol > 0)) fail(ErrorKind::Validation, "convergenceTol must be positive");
  if (!(penaltyWeight > 0 && penaltyWeight <= 2))
    fail(ErrorKind::Validation, "penaltyWeight must be in (0, 2]");
  if (resampleEvery == 0) fail(ErrorKind::Validation, "resampleEvery must be positive");
  if (verticesPerComponent < 3) fail(ErrorKind::Validation, "verticesPerComponent must be >= 3");
  if (projectionPasses == 0) fail(ErrorKind::Validation, "projectionPasses must be positive");
}

std::vector<Vec3> length_gradient(const Polyline& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  std::vector<Vec3> g(n, Vec3::Zero());
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    const Vec3 d = poly.edge_end(i) - poly.edge_start(i);
    const double len = d.norm();
    if (len == 0.0) continue;
    const Vec3 u = d / len;
    g[i] -= u;
    g[(i + 1) % n] += u;
  }
  return g;
}

Polyline resample_uniform(const Polyline& poly, std::size_t n) {
  const double total = poly.length();
  Polyline out;
  out.closed = poly.closed;
  out.vertices.reserve(n);
  const std::size_t segments = poly.closed ? n : n - 1;
  std::size_t edge = 0;
  double edge_begin = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(segments);
    while (edge + 1 < poly.edge_count() &&
           edge_begin + (poly.edge_end(edge) - poly.edge_start(edge)).norm() < target) {
      edge_begin += (poly.edge_end(edge) - poly.edge_start(edge)).norm();
      ++edge;
    }
    const Vec3& a = poly.edge_start(edge);
    const Vec3& b = poly.edge_end(edge);
    const double len = (b - a).norm();
    const double t = len > 0 ? std::clamp((target - edge_begin) / len, 0.0, 1.0) : 0.0;
    out.vertices.push_back(a + t * (b - a));
  }
  return out;
}

LinkConfiguration as_polylines(const LinkConfiguration& config, std::size_t vertices_per_component) {
  LinkConfiguration out = config;
  for (auto& [label, g] : out.geometry)
    if (is_exact(g)) g = to_polyline_sampled(g, vertices_per_component);
  return out;
}

LinkConfiguration perturb(const LinkConfiguration& config, double sigma, std::uint64_t seed,
                          std::size_t vertices_per_component) {
  if (!(sigma >= 0)) fail(ErrorKind::Validation, "sigma must be >= 0");
  if (sigma == 0) return config;
  LinkConfiguration out = as_polylines(config, vertices_per_component);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (const auto& c : out.blueprint.components()) {
    auto& poly = std::get<Polyline>(out.geometry.at(c.label));
    for (auto& v : poly.vertices)
      for (int k = 0; k < 3; ++k) v[k] += noise(rng);
  }
  out.tight = false;
  out.metadata.provenance = "perturb";
  return out;
}

double polyline_clearance(const std::vector<Polyline>& polys) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j)
      best = std::min(best, polyline_distance(polys[i], polys[j]).distance);
  return best;
}

namespace {

struct SegRef {
  std::uint32_t comp;
  std::uint32_t index;
};

std::int64_t cell_key(const Vec3& p, double cell) {
  const auto q = [&](double x) { return static_cast<std::int64_t>(std::floor(x / cell)) & 0x1FFFFF; };
  return (q(p.x()) << 42) | (q(p.y()) << 21) | q(p.z());
}

// Moves the segment's endpoints so the point at parameter s moves by `shift`.
void shift_segment(Vec3& a, Vec3& b, double s, const Vec3& shift) {
  const double k = 1.0 / ((1 - s) * (1 - s) + s * s);
  a += (1 - s) * k * shift;
  b += s * k * shift;
}

}  // namespace

std::size_t push_apart(std::vector<Polyline>& polys, double target, double weight,
                       std::size_t passes) {
  std::vector<SegRef> segs;
  double max_len = 0.0;
  for (std::size_t c = 0; c < polys.size(); ++c)
    for (std::size_t i = 0; i < polys[c].edge_count(); ++i) {
      segs.push_back({static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(i)});
      max_len = std::max(max_len, (polys[c].edge_end(i) - polys[c].edge_start(i)).norm());
    }
  // Slack covers vertex movement across the passes.
  const double slack = 0.05;
  const double cell = target + max_len + slack;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
  std::vector<Vec3> mids(segs.size());
  std::vector<double> halves(segs.size());
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& p = polys[segs[k].comp];
    const Vec3& a = p.edge_start(segs[k].index);
    const Vec3& b = p.edge_end(segs[k].index);
    mids[k] = 0.5 * (a + b);
    halves[k] = 0.5 * (b - a).norm();
    grid[cell_key(mids[k], cell)].push_back(k);
  }
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t k = 0; k < segs.size(); ++k)
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = grid.find(cell_key(mids[k] + cell * Vec3(dx, dy, dz), cell));
          if (it == grid.end()) continue;
          for (std::size_t m : it->second) {
            if (m <= k || segs[m].comp == segs[k].comp) continue;
            const double reach = target + halves[k] + halves[m] + slack;
            if ((mids[k] - mids[m]).squaredNorm() < reach * reach) candidates.emplace_back(k, m);
          }
        }
  std::sort(candidates.begin(), candidates.end());

  std::size_t corrections = 0;
  for (std::size_t pass = 0; pass < passes; ++pass) {
    corrections = 0;
    for (const auto& [k, m] : candidates) {
      auto& pa = polys[segs[k].comp];
      auto& pb = polys[segs[m].comp];
      Vec3& a0 = pa.vertices[segs[k].index];
      Vec3& a1 = pa.vertices[(segs[k].index + 1) % pa.vertices.size()];
      Vec3& b0 = pb.vertices[segs[m].index];
      Vec3& b1 = pb.vertices[(segs[m].index + 1) % pb.vertices.size()];
      const auto cp = closest_points(a0, a1, b0, b1);
      if (cp.distance >= target * (1 - 1e-9)) continue;
      Vec3 dir = cp.pointA - cp.pointB;
      if (cp.distance > 1e-12) {
        dir /= cp.distance;
      } else {
        dir = (a1 - a0).cross(b1 - b0);
        if (dir.norm() < 1e-12) dir = (a1 - a0).unitOrthogonal();
        dir.normalize();
      }
      const double half = 0.5 * weight * (target - cp.distance);
      shift_segment(a0, a1, cp.s, half * dir);
      shift_segment(b0, b1, cp.t, -half * dir);
      ++corrections;
    }
    if (corrections == 0) break;
  }
  return corrections;
}

namespace {

double total_length(const std::vector<Polyline>& polys) {
  double sum = 0.0;
  for (const auto& p : polys) sum += p.length();
  return sum;
}

bool linking_matches(const std::vector<Polyline>& polys, const Eigen::MatrixXi& expected) {
  return linking_matrix(polys, nullptr) == expected;
}

[[noreturn]] void numerical_failure(std::size_t iteration, const std::string& what) {
  std::ostringstream msg;
  msg << what << " at iteration " << iteration;
  fail(ErrorKind::Numerical, msg.str());
}

}  // namespace

RelaxResult relax(const LinkConfiguration& config, const RelaxParams& params) {
  params.validate();
  const auto& bp = config.blueprint;
  const LinkConfiguration start = as_polylines(config, params.verticesPerComponent);
  std::vector<Polyline> polys;
  for (const auto& c : bp.components()) {
    const auto& poly = std::get<Polyline>(start.at(c.label));
    if (!poly.closed || poly.vertices.size() < 3)
      fail(ErrorKind::Validation, "component '" + c.label + "' is not a closed polyline");
    polys.push_back(poly);
  }
  const Eigen::MatrixXi expected = bp.linking_matrix();
  if (!linking_matches(polys, expected))
    fail(ErrorKind::Validation, "initial linking matrix differs from the blueprint");

  RelaxReport report;
  report.lengthHistory.push_back(total_length(polys));
  double checkpoint = report.lengthHistory.back();
  const double blowup = 10.0 * std::max(params.stepSize, params.clearanceTarget);

  std::size_t it = 0;
  while (it < params.maxIterations) {
    ++it;
    for (auto& poly : polys) {
      const auto g = length_gradient(poly);
      const std::size_t n = poly.vertices.size();
      std::vector<double> edge(n);
      for (std::size_t i = 0; i < n; ++i) edge[i] = (poly.edge_end(i) - poly.edge_start(i)).norm();
      for (std::size_t i = 0; i < n; ++i) {
        const double local = std::min(edge[i], edge[(i + n - 1) % n]);
        const double alpha = std::min(params.stepSize, 0.4 * local);
        poly.vertices[i] -= alpha * g[i];
      }
    }
    const auto before = polys;
    push_apart(polys, params.clearanceTarget, params.penaltyWeight, params.projectionPasses);
    for (std::size_t c = 0; c < polys.size(); ++c)
      for (std::size_t i = 0; i < polys[c].vertices.size(); ++i) {
        const Vec3& v = polys[c].vertices[i];
        if (!v.allFinite()) numerical_failure(it, "non-finite vertex");
        if ((v - before[c].vertices[i]).norm() > blowup) numerical_failure(it, "step blowup");
      }

    if (it % params.resampleEvery == 0) {
      for (auto& poly : polys) poly = resample_uniform(poly, poly.vertices.size());
      push_apart(polys, params.clearanceTarget, params.penaltyWeight, params.projectionPasses);
      if (!linking_matches(polys, expected)) {
        std::ostringstream msg;
        msg << "linking matrix changed by iteration " << it;
        fail(ErrorKind::RelaxationFailed, msg.str());
      }
      const double length = total_length(polys);
      report.lengthHistory.push_back(length);
      const bool still = std::abs(checkpoint - length) <= params.convergenceTol * length;
      checkpoint = length;
      if (still && polyline_clearance(polys) >= params.clearanceTarget - 1e-3) {
        report.converged = true;
        break;
      }
    } else {
      report.lengthHistory.push_back(total_length(polys));
    }
  }

  push_apart(polys, params.clearanceTarget, 1.0, 100);
  report.iterations = it;
  report.finalLength = total_length(polys);
  report.finalClearance = polys.size() >= 2 ? polyline_clearance(polys) : 0.0;

  RelaxResult result{std::move(report), start};
  for (std::size_t c = 0; c < polys.size(); ++c)
    result.config.geometry.at(bp.components()[c].label) = std::move(polys[c]);
  result.config.tight = false;
  result.config.metadata.provenance = "relax";
  return result;
}

}  // namespace gordian
