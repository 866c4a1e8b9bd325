#include "gordian/geom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gordian/error.hpp"

namespace gordian {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::NonGeneric: return "non-generic";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::RelaxationFailed: return "relaxation-failed";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::ScheduleInfeasible: return "schedule-infeasible";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return exit_code::kParse;
    case ErrorKind::Numerical:
    case ErrorKind::RelaxationFailed:
    case ErrorKind::IllConditioned: return exit_code::kNumerical;
    default: return exit_code::kDomain;
  }
}

// ---------------------------------------------------------------------------
// PlanarFrame

PlanarFrame PlanarFrame::make(const Vec3& origin, const Vec3& u, const Vec3& v) {
  PlanarFrame f{origin, u, v, u.cross(v)};
  auto issues = f.problems();
  if (!issues.empty()) fail(ErrorKind::Validation, "planar frame: " + issues.front());
  return f;
}

std::vector<std::string> PlanarFrame::problems() const {
  std::vector<std::string> out;
  if (std::abs(u.norm() - 1.0) > kFrameTol || std::abs(v.norm() - 1.0) > kFrameTol ||
      std::abs(n.norm() - 1.0) > kFrameTol)
    out.emplace_back("frame axes are not unit length");
  if (std::abs(u.dot(v)) > kFrameTol) out.emplace_back("frame axes u, v not orthogonal");
  if ((u.cross(v) - n).norm() > kFrameTol) out.emplace_back("frame normal is not u x v");
  return out;
}

// ---------------------------------------------------------------------------
// Pieces

namespace {

struct PieceLength {
  double operator()(const Segment& s) const { return (s.end - s.start).norm(); }
  double operator()(const Arc& a) const { return std::abs(a.radius * a.sweep); }
};

Vec3 arc_point(const Arc& a, double angle) {
  return a.frame.origin + a.radius * (std::cos(angle) * a.frame.u + std::sin(angle) * a.frame.v);
}

}  // namespace

double piece_length(const CurvePiece& piece) { return std::visit(PieceLength{}, piece); }

Vec3 piece_point(const CurvePiece& piece, double t) {
  if (const auto* s = std::get_if<Segment>(&piece)) {
    if (t >= 1.0) return s->end;
    return s->start + t * (s->end - s->start);
  }
  const auto& a = std::get<Arc>(piece);
  return arc_point(a, a.startAngle + t * a.sweep);
}

Vec3 piece_tangent(const CurvePiece& piece, double t) {
  if (const auto* s = std::get_if<Segment>(&piece)) return (s->end - s->start).normalized();
  const auto& a = std::get<Arc>(piece);
  const double angle = a.startAngle + t * a.sweep;
  const Vec3 d = -std::sin(angle) * a.frame.u + std::cos(angle) * a.frame.v;
  return a.sweep >= 0 ? d : Vec3(-d);
}

// ---------------------------------------------------------------------------
// Similarity

Similarity Similarity::rotation_about(const Vec3& axis, double angle, const Vec3& center) {
  Similarity s;
  s.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  s.translation = center - s.rotation * center;
  return s;
}

Similarity Similarity::translation_by(const Vec3& t) {
  Similarity s;
  s.translation = t;
  return s;
}

Similarity Similarity::scaling(double factor, const Vec3& center) {
  Similarity s;
  s.scale = factor;
  s.translation = center - factor * center;
  return s;
}

Similarity Similarity::compose(const Similarity& other) const {
  Similarity s;
  s.rotation = rotation * other.rotation;
  s.scale = scale * other.scale;
  s.translation = scale * (rotation * other.translation) + translation;
  return s;
}

// ---------------------------------------------------------------------------
// ArcSegCurve

ArcSegCurve::ArcSegCurve(std::vector<CurvePiece> pieces, bool closed)
    : pieces_(std::move(pieces)), closed_(closed) {
  cumulative_.reserve(pieces_.size() + 1);
  cumulative_.push_back(0.0);
  for (const auto& p : pieces_) cumulative_.push_back(cumulative_.back() + piece_length(p));

  if (pieces_.empty()) problems_.emplace_back("curve has no pieces");
  if (!closed_) problems_.emplace_back("curve is not closed");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    std::ostringstream where;
    where << "piece " << i << ": ";
    if (const auto* s = std::get_if<Segment>(&p)) {
      if ((s->end - s->start).norm() <= kClosureTol)
        problems_.push_back(where.str() + "segment has zero length");
    } else {
      const auto& a = std::get<Arc>(p);
      if (!(a.radius > 0)) problems_.push_back(where.str() + "arc radius must be positive");
      if (!(std::abs(a.sweep) > 0) || std::abs(a.sweep) > kTwoPi + 1e-12)
        problems_.push_back(where.str() + "arc sweep must lie in (0, 2pi]");
      for (const auto& f : a.frame.problems()) problems_.push_back(where.str() + f);
    }
    if (!std::isfinite(piece_length(p))) problems_.push_back(where.str() + "non-finite length");
  }
  const std::size_t n = pieces_.size();
  for (std::size_t i = 0; i + 1 < n + (closed_ ? 1 : 0) && n > 0; ++i) {
    const std::size_t j = (i + 1) % n;
    const double gap = (piece_end(pieces_[i]) - piece_start(pieces_[j])).norm();
    if (gap > kClosureTol) {
      std::ostringstream msg;
      msg << "gap of " << gap << " between piece " << i << " and piece " << j;
      problems_.push_back(msg.str());
    }
  }
}

void ArcSegCurve::validate() const {
  if (problems_.empty()) return;
  std::string msg = "invalid curve:";
  for (const auto& p : problems_) msg += " " + p + ";";
  fail(ErrorKind::Validation, msg);
}

double ArcSegCurve::length() const {
  validate();
  return cumulative_.back();
}

void ArcSegCurve::locate(double s, std::size_t& index, double& local) const {
  validate();
  if (!(s >= 0.0 && s < 1.0)) {
    std::ostringstream msg;
    msg << "arclength fraction " << s << " outside [0,1)";
    fail(ErrorKind::Domain, msg.str());
  }
  const double target = s * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  index = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
  index = std::min(index, pieces_.size() - 1);
  const double len = cumulative_[index + 1] - cumulative_[index];
  local = len > 0 ? std::clamp((target - cumulative_[index]) / len, 0.0, 1.0) : 0.0;
}

Vec3 ArcSegCurve::point_at(double s) const {
  std::size_t i;
  double t;
  locate(s, i, t);
  return piece_point(pieces_[i], t);
}

Vec3 ArcSegCurve::tangent_at(double s) const {
  std::size_t i;
  double t;
  locate(s, i, t);
  return piece_tangent(pieces_[i], t);
}

std::size_t ArcSegCurve::piece_index_at(double s) const {
  std::size_t i;
  double t;
  locate(s, i, t);
  return i;
}

std::vector<double> ArcSegCurve::boundary_fractions() const {
  validate();
  std::vector<double> out;
  out.reserve(cumulative_.size());
  for (double c : cumulative_) out.push_back(c / cumulative_.back());
  out.back() = 1.0;
  return out;
}

ArcSegCurve ArcSegCurve::transformed(const Similarity& t) const {
  std::vector<CurvePiece> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) {
    if (const auto* s = std::get_if<Segment>(&p)) {
      out.emplace_back(Segment{t.apply(s->start), t.apply(s->end)});
    } else {
      Arc a = std::get<Arc>(p);
      a.frame.origin = t.apply(a.frame.origin);
      a.frame.u = t.apply_direction(a.frame.u);
      a.frame.v = t.apply_direction(a.frame.v);
      a.frame.n = a.frame.u.cross(a.frame.v);
      a.radius *= t.scale;
      out.emplace_back(a);
    }
  }
  return ArcSegCurve(std::move(out), closed_);
}

ArcSegCurve ArcSegCurve::reversed() const {
  std::vector<CurvePiece> out;
  out.reserve(pieces_.size());
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    if (const auto* s = std::get_if<Segment>(&*it)) {
      out.emplace_back(Segment{s->end, s->start});
    } else {
      Arc a = std::get<Arc>(*it);
      a.startAngle += a.sweep;
      a.sweep = -a.sweep;
      out.emplace_back(a);
    }
  }
  return ArcSegCurve(std::move(out), closed_);
}

// ---------------------------------------------------------------------------
// Polyline

double Polyline::length() const {
  double total = 0.0;
  for (std::size_t i = 0; i < edge_count(); ++i) total += (edge_end(i) - edge_start(i)).norm();
  return total;
}

std::vector<std::string> Polyline::problems() const {
  std::vector<std::string> out;
  const std::size_t need = closed ? 3 : 2;
  if (vertices.size() < need) {
    out.emplace_back("polyline has too few vertices");
    return out;
  }
  for (std::size_t i = 0; i < edge_count(); ++i) {
    if (!edge_start(i).allFinite()) {
      out.emplace_back("non-finite vertex " + std::to_string(i));
      continue;
    }
    if ((edge_end(i) - edge_start(i)).norm() <= kClosureTol)
      out.emplace_back("coincident consecutive vertices at " + std::to_string(i));
  }
  return out;
}

Polyline Polyline::transformed(const Similarity& t) const {
  Polyline out{{}, closed};
  out.vertices.reserve(vertices.size());
  for (const auto& v : vertices) out.vertices.push_back(t.apply(v));
  return out;
}

Polyline Polyline::reversed() const {
  Polyline out{{vertices.rbegin(), vertices.rend()}, closed};
  return out;
}

// ---------------------------------------------------------------------------
// Free operations

double curve_length(const ArcSegCurve& curve) { return curve.length(); }

Vec3 point_at(const ArcSegCurve& curve, double s) { return curve.point_at(s); }

Polyline discretize(const ArcSegCurve& curve, double max_chord_error) {
  if (!(max_chord_error > 0)) fail(ErrorKind::Domain, "maxChordError must be positive");
  for (const auto& p : curve.problems())
    if (p != "curve is not closed") curve.validate();

  Polyline out{{}, curve.closed()};
  for (const auto& piece : curve.pieces()) {
    if (const auto* s = std::get_if<Segment>(&piece)) {
      out.vertices.push_back(s->start);
      continue;
    }
    const auto& a = std::get<Arc>(piece);
    const double ratio = max_chord_error / a.radius;
    const double step = ratio >= 1.0 ? kPi : 2.0 * std::acos(1.0 - ratio);
    auto count = static_cast<std::size_t>(std::ceil(std::abs(a.sweep) / step - 1e-12));
    count = std::max<std::size_t>(count, 1);
    for (std::size_t k = 0; k < count; ++k)
      out.vertices.push_back(piece_point(piece, static_cast<double>(k) / count));
  }
  if (!curve.closed()) {
    out.vertices.push_back(piece_end(curve.pieces().back()));
  } else if (out.vertices.size() < 3) {
    // A closed curve needs a genuine polygon; refine the first arc.
    return discretize(curve, max_chord_error * 0.25);
  }
  return out;
}

Polyline sample_uniform(const ArcSegCurve& curve, std::size_t n) {
  if (n < 3) fail(ErrorKind::Domain, "uniform sampling needs at least 3 vertices");
  Polyline out{{}, true};
  out.vertices.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    out.vertices.push_back(curve.point_at(static_cast<double>(k) / static_cast<double>(n)));
  return out;
}

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  // Andrew's monotone chain; the scale-aware epsilon drops near-collinear points.
  double extent = 0.0;
  for (const auto& p : pts) extent = std::max(extent, p.cwiseAbs().maxCoeff());
  const double eps = 1e-14 * std::max(1.0, extent * extent);

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= eps) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

ArcSegCurve offset_hull_boundary(const PlanarFrame& frame, std::span<const Vec2> centers,
                                 double radius) {
  if (!(radius > 0)) fail(ErrorKind::Validation, "offset radius must be positive");
  if (centers.empty()) fail(ErrorKind::Validation, "offset hull needs at least one center");
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if ((centers[i] - centers[j]).norm() <= kClosureTol)
        fail(ErrorKind::Validation, "duplicate centers " + std::to_string(i) + " and " +
                                        std::to_string(j));

  const auto hull = convex_hull(centers);
  std::vector<CurvePiece> pieces;
  if (hull.size() == 1) {
    pieces.emplace_back(Arc{frame.at(frame.lift(hull[0])), radius, 0.0, kTwoPi});
    return ArcSegCurve(std::move(pieces));
  }

  const std::size_t m = hull.size();
  std::vector<Vec2> normals(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 e = hull[(i + 1) % m] - hull[i];
    normals[i] = Vec2(e.y(), -e.x()).normalized();
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& in = normals[(i + m - 1) % m];
    const Vec2& out = normals[i];
    double turn = std::atan2(in.x() * out.y() - in.y() * out.x(), in.dot(out));
    if (turn <= 0) turn += kTwoPi;
    // Zero-sweep arcs at collinear vertices carry no length; drop them.
    if (turn > 1e-15)
      pieces.emplace_back(
          Arc{frame.at(frame.lift(hull[i])), radius, std::atan2(in.y(), in.x()), turn});
    const Vec2 a = hull[i] + radius * out;
    const Vec2 b = hull[(i + 1) % m] + radius * out;
    pieces.emplace_back(Segment{frame.lift(a), frame.lift(b)});
  }
  return ArcSegCurve(std::move(pieces));
}

}  // namespace gordian
