#include "gordian/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gordian/clearance.hpp"
#include "gordian/error.hpp"

namespace gordian {

namespace {

// Signed solid angle swept by segment [p1,p2] as seen along segment [p3,p4]
// (Klenin and Langowski). Sums to 4*pi*Lk over all edge pairs.
double edge_pair_solid_angle(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
  const Vec3 r13 = p3 - p1;
  const Vec3 r14 = p4 - p1;
  const Vec3 r23 = p3 - p2;
  const Vec3 r24 = p4 - p2;
  Vec3 n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
  for (auto& v : n) {
    const double len = v.norm();
    if (len <= 1e-300) return 0.0;
    v /= len;
  }
  auto as = [](double x) { return std::asin(std::clamp(x, -1.0, 1.0)); };
  const double omega = as(n[0].dot(n[1])) + as(n[1].dot(n[2])) + as(n[2].dot(n[3])) +
                       as(n[3].dot(n[0]));
  const double orient = (p4 - p3).cross(p2 - p1).dot(r13);
  if (orient > 0) return omega;
  if (orient < 0) return -omega;
  return 0.0;
}

bool boxes_disjoint(const Polyline& a, const Polyline& b) {
  Vec3 alo = a.vertices.front(), ahi = alo, blo = b.vertices.front(), bhi = blo;
  for (const auto& v : a.vertices) alo = alo.cwiseMin(v), ahi = ahi.cwiseMax(v);
  for (const auto& v : b.vertices) blo = blo.cwiseMin(v), bhi = bhi.cwiseMax(v);
  return (ahi.array() < blo.array()).any() || (bhi.array() < alo.array()).any();
}

}  // namespace

double gauss_linking_sum(const Polyline& a, const Polyline& b) {
  // Row sums first, then a fixed-order sum over rows, so the value is bit-stable.
  std::vector<double> rows(a.edge_count(), 0.0);
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < b.edge_count(); ++j)
      row += edge_pair_solid_angle(a.edge_start(i), a.edge_end(i), b.edge_start(j), b.edge_end(j));
    rows[i] = row;
  }
  return std::accumulate(rows.begin(), rows.end(), 0.0) / (4.0 * kPi);
}

LinkingResult linking_number(const Polyline& a, const Polyline& b) {
  const double gap = polyline_distance(a, b).distance;
  if (!(gap >= 1e-6)) {
    std::ostringstream msg;
    msg << "linking number ill-conditioned: curves are " << gap << " apart";
    fail(ErrorKind::IllConditioned, msg.str());
  }
  LinkingResult r;
  r.raw = gauss_linking_sum(a, b);
  r.value = static_cast<int>(std::lround(r.raw));
  r.residual = std::abs(r.raw - r.value);
  return r;
}

Eigen::MatrixXi linking_matrix(const std::vector<Polyline>& polys, double* max_residual) {
  const auto n = static_cast<Eigen::Index>(polys.size());
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto& a = polys[static_cast<std::size_t>(i)];
      const auto& b = polys[static_cast<std::size_t>(j)];
      if (boxes_disjoint(a, b)) continue;
      const double raw = gauss_linking_sum(a, b);
      const auto value = static_cast<int>(std::lround(raw));
      worst = std::max(worst, std::abs(raw - value));
      m(i, j) = m(j, i) = value;
    }
  }
  if (max_residual) *max_residual = worst;
  return m;
}

LinkingMatrix linking_matrix(const LinkConfiguration& config, std::size_t vertices_per_component) {
  LinkingMatrix out;
  std::vector<Polyline> polys;
  for (const auto& c : config.blueprint.components()) {
    out.labels.push_back(c.label);
    polys.push_back(to_polyline_sampled(config.at(c.label), vertices_per_component));
  }
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j)
      if (!boxes_disjoint(polys[i], polys[j]) &&
          !(polyline_distance(polys[i], polys[j]).distance >= 1e-6))
        fail(ErrorKind::IllConditioned,
             "linking number ill-conditioned between " + out.labels[i] + " and " + out.labels[j]);
  out.values = linking_matrix(polys, &out.maxResidual);
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(ViolationCategory c) {
  switch (c) {
    case ViolationCategory::MissingGeometry: return "missing-geometry";
    case ViolationCategory::UnknownGeometry: return "unknown-geometry";
    case ViolationCategory::Geometry: return "geometry";
    case ViolationCategory::Clearance: return "clearance";
    case ViolationCategory::Linking: return "linking";
  }
  return "?";
}

bool ValidationReport::has(ViolationCategory c) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.category == c; });
}

ValidationReport validate(const LinkConfiguration& config, const ValidateOptions& options) {
  ValidationReport report;
  const auto& bp = config.blueprint;
  bool geometry_ok = true;
  for (const auto& c : bp.components()) {
    auto it = config.geometry.find(c.label);
    if (it == config.geometry.end()) {
      report.violations.push_back(
          {ViolationCategory::MissingGeometry, {c.label}, "no geometry for '" + c.label + "'"});
      geometry_ok = false;
      continue;
    }
    for (const auto& p : geometry_problems(it->second)) {
      report.violations.push_back({ViolationCategory::Geometry, {c.label}, p});
      geometry_ok = false;
    }
  }
  for (const auto& [label, g] : config.geometry)
    if (!bp.contains(label))
      report.violations.push_back(
          {ViolationCategory::UnknownGeometry, {label}, "geometry for unknown label '" + label + "'"});
  if (!geometry_ok) return report;

  if (config.tight && bp.size() >= 2) {
    const auto clearance = gehring_thickness(config, options.maxChordError);
    if (clearance.globalMin < 1.0 - options.clearanceTol) {
      std::ostringstream msg;
      msg << "clearance " << clearance.globalMin << " below 1 between " << clearance.argmin.labelA
          << " and " << clearance.argmin.labelB;
      report.violations.push_back({ViolationCategory::Clearance,
                                   {clearance.argmin.labelA, clearance.argmin.labelB}, msg.str()});
    }
  }

  std::vector<Polyline> polys;
  for (const auto& c : bp.components())
    polys.push_back(to_polyline_sampled(config.at(c.label), options.linkingVertices));
  const auto expected = bp.linking_matrix();
  for (std::size_t i = 0; i < polys.size(); ++i) {
    for (std::size_t j = i + 1; j < polys.size(); ++j) {
      const auto& a = bp.components()[i].label;
      const auto& b = bp.components()[j].label;
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (boxes_disjoint(polys[i], polys[j])) {
        if (expected(ii, jj) != 0)
          report.violations.push_back({ViolationCategory::Linking, {a, b},
                                       "linking " + a + "-" + b + " is 0, expected " +
                                           std::to_string(expected(ii, jj))});
        continue;
      }
      try {
        const auto lk = linking_number(polys[i], polys[j]);
        if (lk.value != expected(ii, jj))
          report.violations.push_back({ViolationCategory::Linking, {a, b},
                                       "linking " + a + "-" + b + " is " + std::to_string(lk.value) +
                                           ", expected " + std::to_string(expected(ii, jj))});
      } catch (const Error& e) {
        report.violations.push_back({ViolationCategory::Linking, {a, b}, e.what()});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

SymmetryGroup::SymmetryGroup(std::vector<std::string> labels,
                             std::vector<std::vector<std::size_t>> perms)
    : labels_(std::move(labels)), perms_(std::move(perms)) {
  for (const auto& p : perms_)
    if (p.size() != labels_.size())
      fail(ErrorKind::Validation, "symmetry permutation size does not match label count");
}

SymmetryGroup SymmetryGroup::trivial(std::vector<std::string> labels) {
  std::vector<std::size_t> id(labels.size());
  std::iota(id.begin(), id.end(), 0);
  return SymmetryGroup(std::move(labels), {id});
}

const std::string& SymmetryGroup::image(std::size_t k, const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return labels_[perms_.at(k)[i]];
  fail(ErrorKind::Domain, "symmetry group has no label '" + label + "'");
}

bool SymmetryGroup::satisfies_group_axioms() const {
  const std::size_t n = labels_.size();
  auto contains = [&](const std::vector<std::size_t>& p) {
    return std::find(perms_.begin(), perms_.end(), p) != perms_.end();
  };
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  if (!contains(id)) return false;
  for (const auto& p : perms_) {
    std::vector<std::size_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[p[i]] = i;
    if (!contains(inv)) return false;
    for (const auto& q : perms_) {
      std::vector<std::size_t> pq(n);
      for (std::size_t i = 0; i < n; ++i) pq[i] = p[q[i]];
      if (!contains(pq)) return false;
    }
  }
  return true;
}

SymmetryGroup blueprint_automorphisms(const LinkBlueprint& bp) {
  const std::size_t n = bp.size();
  if (n > kMaxAutomorphismComponents)
    fail(ErrorKind::Capacity, "automorphism search limited to " +
                                  std::to_string(kMaxAutomorphismComponents) + " components");
  std::vector<std::string> labels;
  for (const auto& c : bp.components()) labels.push_back(c.label);
  const auto lk = bp.linking_matrix();

  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      ok = bp.components()[i].type == bp.components()[perm[i]].type;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        ok = lk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
             lk(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j]));
    if (ok) found.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return SymmetryGroup(std::move(labels), std::move(found));
}

}  // namespace gordian
