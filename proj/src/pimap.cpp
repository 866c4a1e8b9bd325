#include "gordian/pimap.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gordian/error.hpp"

namespace gordian {

CirclePoints4::CirclePoints4(std::array<CirclePoint, 4> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const CirclePoint& a, const CirclePoint& b) { return a.s < b.s; });
  for (const auto& e : entries_)
    if (!(e.s >= 0.0 && e.s < 1.0))
      fail(ErrorKind::Domain, "circle point fraction outside [0,1)");
  for (std::size_t i = 0; i < 4; ++i) {
    const double gap = i + 1 < 4 ? entries_[i + 1].s - entries_[i].s
                                 : entries_[0].s + 1.0 - entries_[3].s;
    if (!(gap > 1e-12))
      fail(ErrorKind::Degenerate, "circle points " + entries_[i].label + " and " +
                                      entries_[(i + 1) % 4].label + " coincide");
  }
}

std::vector<std::string> CirclePoints4::labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

namespace {

struct SpanningRegion {
  Vec3 origin;
  Vec3 normal;
  Vec3 e1;
  Vec3 e2;
  std::vector<Vec2> polygon;

  Vec2 project(const Vec3& p) const {
    const Vec3 d = p - origin;
    return {d.dot(e1), d.dot(e2)};
  }

  bool contains(const Vec2& q) const {
    // Winding number; the boundary itself is never hit by a generic crossing.
    int winding = 0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = polygon[i];
      const Vec2& b = polygon[(i + 1) % n];
      const double cross = (b.x() - a.x()) * (q.y() - a.y()) - (q.x() - a.x()) * (b.y() - a.y());
      if (a.y() <= q.y()) {
        if (b.y() > q.y() && cross > 0) ++winding;
      } else if (b.y() <= q.y() && cross < 0) {
        --winding;
      }
    }
    return winding != 0;
  }
};

SpanningRegion spanning_region(const std::string& label, const ComponentGeometry& g,
                               const PiMapOptions& options) {
  const Polyline poly = to_polyline(g, options.regionChordError);
  const auto& vs = poly.vertices;
  Vec3 centroid = Vec3::Zero();
  for (const auto& v : vs) centroid += v;
  centroid /= static_cast<double>(vs.size());
  Mat3 cov = Mat3::Zero();
  double diameter = 0.0;
  for (const auto& v : vs) {
    const Vec3 d = v - centroid;
    cov += d * d.transpose();
    diameter = std::max(diameter, 2.0 * d.norm());
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  SpanningRegion r;
  r.origin = centroid;
  r.normal = eig.eigenvectors().col(0).normalized();
  r.e1 = eig.eigenvectors().col(2).normalized();
  r.e2 = r.normal.cross(r.e1);
  double deviation = 0.0;
  for (const auto& v : vs) deviation = std::max(deviation, std::abs((v - centroid).dot(r.normal)));
  if (deviation > options.planarityTol * std::max(diameter, 1e-300)) {
    std::ostringstream msg;
    msg << "component '" << label << "' is not planar (deviation " << deviation << ")";
    fail(ErrorKind::Domain, msg.str());
  }
  r.polygon.reserve(vs.size());
  for (const auto& v : vs) r.polygon.push_back(r.project(v));
  return r;
}

struct Crossing {
  double s;
  Vec3 point;
  Vec3 tangent;
};

std::vector<Crossing> plane_crossings(const ComponentGeometry& central, const SpanningRegion& r,
                                      const PiMapOptions& options) {
  std::vector<Crossing> out;
  auto side = [&](const Vec3& p) { return (p - r.origin).dot(r.normal); };

  if (const auto* curve = std::get_if<ArcSegCurve>(&central)) {
    const std::size_t m = options.centralSamples;
    auto frac = [&](std::size_t k) { return static_cast<double>(k) / static_cast<double>(m); };
    std::vector<double> f(m + 1);
    for (std::size_t k = 0; k < m; ++k) f[k] = side(curve->point_at(frac(k)));
    f[m] = f[0];
    auto eval = [&](double s) { return side(curve->point_at(s >= 1.0 ? s - 1.0 : s)); };
    for (std::size_t k = 0; k < m; ++k) {
      if ((f[k] >= 0) == (f[k + 1] >= 0)) continue;
      double lo = frac(k), hi = frac(k + 1);
      const bool lo_nonneg = f[k] >= 0;
      while (hi - lo > options.bisectionTol) {
        const double mid = 0.5 * (lo + hi);
        if ((eval(mid) >= 0) == lo_nonneg) lo = mid; else hi = mid;
      }
      double s = 0.5 * (lo + hi);
      if (s >= 1.0) s -= 1.0;
      out.push_back({s, curve->point_at(s), curve->tangent_at(s)});
    }
    return out;
  }

  const auto& poly = std::get<Polyline>(central);
  const double total = poly.length();
  double walked = 0.0;
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    const Vec3& a = poly.edge_start(i);
    const Vec3& b = poly.edge_end(i);
    const double len = (b - a).norm();
    const double fa = side(a);
    const double fb = side(b);
    if ((fa >= 0) != (fb >= 0)) {
      const double t = fa / (fa - fb);
      double s = (walked + t * len) / total;
      if (s >= 1.0) s -= 1.0;
      out.push_back({s, a + t * (b - a), (b - a) / len});
    }
    walked += len;
  }
  return out;
}

std::string describe(double x) {
  std::ostringstream o;
  o << x;
  return o.str();
}

}  // namespace

CirclePoints4 pi_map(const LinkConfiguration& config, const PiMapOptions& options) {
  const auto& bp = config.blueprint;
  const auto central = bp.central_label();
  if (!central) fail(ErrorKind::Domain, "pi map needs exactly one central component");
  const auto neighbors = bp.neighbors(*central);
  if (neighbors.size() != 4)
    fail(ErrorKind::Domain, "central component links " + std::to_string(neighbors.size()) +
                                " components, pi map needs 4");
  const auto& c = config.at(*central);
  if (const auto problems = geometry_problems(c); !problems.empty())
    fail(ErrorKind::Validation, "central component: " + problems.front());

  std::array<CirclePoint, 4> points;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& label = neighbors[k];
    const auto region = spanning_region(label, config.at(label), options);
    std::vector<Crossing> inside;
    for (const auto& x : plane_crossings(c, region, options))
      if (region.contains(region.project(x.point))) inside.push_back(x);
    if (inside.size() != 1)
      fail(ErrorKind::NonGeneric, "central curve crosses the spanning region of '" + label + "' " +
                                      std::to_string(inside.size()) + " times");
    const double angle = std::asin(std::min(1.0, std::abs(inside[0].tangent.dot(region.normal))));
    if (angle < options.minCrossingAngle)
      fail(ErrorKind::IllConditioned,
           "near tangential crossing of '" + label + "' (angle " + describe(angle) + " rad)");
    points[k] = {label, inside[0].s};
  }
  return CirclePoints4(points);
}

OnArcReport on_arc_check(const LinkConfiguration& config, const PiMapOptions& options) {
  OnArcReport report;
  const auto points = pi_map(config, options);
  const auto& c = config.at(*config.blueprint.central_label());
  const auto* curve = std::get_if<ArcSegCurve>(&c);
  if (!curve) {
    report.note = "central component is a polyline; arcs are only defined for exact curves";
    for (const auto& p : points.entries()) report.placements.push_back({p.label, p.s, 0, false});
    return report;
  }
  const auto bounds = curve->boundary_fractions();
  const auto& pieces = curve->pieces();
  report.ok = true;
  for (const auto& p : points.entries()) {
    ArcPlacement placement{p.label, p.s, curve->piece_index_at(p.s), false};
    placement.onArc = is_arc(pieces[placement.pieceIndex]);
    // Arcs are closed: a point on a boundary counts for the neighbouring arc.
    constexpr double kEdge = 1e-12;
    const std::size_t i = placement.pieceIndex;
    if (!placement.onArc && p.s - bounds[i] <= kEdge)
      placement.onArc = is_arc(pieces[(i + pieces.size() - 1) % pieces.size()]);
    if (!placement.onArc && bounds[i + 1] - p.s <= kEdge)
      placement.onArc = is_arc(pieces[(i + 1) % pieces.size()]);
    report.ok = report.ok && placement.onArc;
    report.placements.push_back(placement);
  }
  if (!report.ok) report.note = "an attachment point lies on a straight segment";
  return report;
}

std::string DihedralClass::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < canonicalWord.size(); ++i)
    out += (i ? " " : "") + canonicalWord[i];
  out += ")";
  return out;
}

DihedralClass dihedral_classify(const CirclePoints4& points, const SymmetryGroup& sym,
                                const LinkBlueprint* bp) {
  const auto word = points.labels();
  std::vector<std::string> best;
  for (std::size_t g = 0; g < sym.order(); ++g) {
    std::array<std::string, 4> mapped;
    for (std::size_t i = 0; i < 4; ++i) mapped[i] = sym.image(g, word[i]);
    for (std::size_t r = 0; r < 4; ++r) {
      for (int dir : {1, -1}) {
        std::vector<std::string> cand(4);
        for (std::size_t i = 0; i < 4; ++i)
          cand[i] = mapped[(r + static_cast<std::size_t>(4 + dir * static_cast<int>(i))) % 4];
        if (best.empty() || cand < best) best = std::move(cand);
      }
    }
  }
  DihedralClass out{best, {}};
  if (bp)
    for (const auto& label : best) out.typeWord.emplace_back(to_string(bp->type_of(label)));
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(GordianVerdict v) {
  switch (v) {
    case GordianVerdict::Gordian: return "GORDIAN";
    case GordianVerdict::BlueprintMismatch: return "BLUEPRINT-MISMATCH";
    case GordianVerdict::NotTight: return "NOT-TIGHT";
    case GordianVerdict::PiMapFailed: return "PI-MAP-FAILED";
    case GordianVerdict::NotOnArc: return "NOT-ON-ARC";
    case GordianVerdict::NotDistinguished: return "NOT-DISTINGUISHED";
  }
  return "?";
}

namespace {

void fill_side(GordianSide& side, const LinkConfiguration& config, const SymmetryGroup* sym,
               const CertifyOptions& tolerances) {
  side.tightness = certify_tight(config, tolerances);
  try {
    side.points = pi_map(config);
    side.onArc = on_arc_check(config);
    if (sym) side.dihedral = dihedral_classify(*side.points, *sym, &config.blueprint);
  } catch (const Error& e) {
    side.piMapError = e.what();
  }
}

}  // namespace

GordianCertificate gordian_certify(const LinkConfiguration& a, const LinkConfiguration& b,
                                   const CertifyOptions& tolerances) {
  GordianCertificate cert;
  cert.tolerances = tolerances;
  cert.premises = {
      "every length minimizer in this link homotopy class consists of stadium curves around 1, 2 "
      "or 4 disjoint unit disks, the 4-disk curves forming a rhombus-angle interval",
      "the attachment map to 4-point configurations on the central curve is continuous on the "
      "space of minimizers",
      "the map's image lies in the subset with every point on a curved arc, a deformation "
      "retract of the 4-point configuration space",
      "hence distinct dihedral classes admit no clearance-1, length-preserving link homotopy",
  };
  cert.blueprintsMatch = a.blueprint == b.blueprint;

  std::optional<SymmetryGroup> sym;
  if (cert.blueprintsMatch) {
    try {
      sym = blueprint_automorphisms(a.blueprint);
      cert.symmetryOrder = sym->order();
    } catch (const Error& e) {
      cert.reasons.push_back(e.what());
    }
  }
  fill_side(cert.a, a, sym ? &*sym : nullptr, tolerances);
  fill_side(cert.b, b, sym ? &*sym : nullptr, tolerances);

  auto tight = [](const GordianSide& s) {
    return s.tightness.verdict == TightnessVerdict::GloballyMinimal;
  };
  if (!cert.blueprintsMatch || !sym) {
    cert.verdict = GordianVerdict::BlueprintMismatch;
    cert.reasons.push_back("the two configurations do not share a blueprint");
  } else if (!tight(cert.a) || !tight(cert.b)) {
    cert.verdict = GordianVerdict::NotTight;
    if (!tight(cert.a))
      cert.reasons.push_back(std::string("first input is ") + to_string(cert.a.tightness.verdict));
    if (!tight(cert.b))
      cert.reasons.push_back(std::string("second input is ") + to_string(cert.b.tightness.verdict));
  } else if (!cert.a.dihedral || !cert.b.dihedral) {
    cert.verdict = GordianVerdict::PiMapFailed;
    if (!cert.a.piMapError.empty()) cert.reasons.push_back("first input: " + cert.a.piMapError);
    if (!cert.b.piMapError.empty()) cert.reasons.push_back("second input: " + cert.b.piMapError);
  } else if (!cert.a.onArc->ok || !cert.b.onArc->ok) {
    cert.verdict = GordianVerdict::NotOnArc;
    cert.reasons.push_back("an attachment point lies off the central curve's arcs");
  } else if (*cert.a.dihedral == *cert.b.dihedral) {
    cert.verdict = GordianVerdict::NotDistinguished;
    cert.reasons.push_back("both configurations have dihedral class " + cert.a.dihedral->str());
  } else {
    cert.verdict = GordianVerdict::Gordian;
    cert.reasons.push_back("dihedral classes " + cert.a.dihedral->str() + " and " +
                           cert.b.dihedral->str() + " differ");
  }
  return cert;
}

}  // namespace gordian
