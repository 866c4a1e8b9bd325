#pragma once

// Exact closed curves made of straight segments and planar circular arcs.
//
// All lengths are in rope-radius units: a tight contact between two
// components sits at distance exactly 1.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gordian {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Curve closure and vertex-separation tolerance.
inline constexpr double kClosureTol = 1e-9;
/// Orthonormality tolerance for frames.
inline constexpr double kFrameTol = 1e-12;

struct PlanarFrame {
  Vec3 origin = Vec3::Zero();
  Vec3 u = Vec3::UnitX();
  Vec3 v = Vec3::UnitY();
  Vec3 n = Vec3::UnitZ();

  /// Builds a frame with n = u x v. Throws if u, v are not orthonormal.
  static PlanarFrame make(const Vec3& origin, const Vec3& u, const Vec3& v);

  PlanarFrame at(const Vec3& new_origin) const {
    PlanarFrame f = *this;
    f.origin = new_origin;
    return f;
  }

  Vec3 lift(const Vec2& p) const { return origin + p.x() * u + p.y() * v; }
  Vec2 project(const Vec3& p) const {
    const Vec3 d = p - origin;
    return {d.dot(u), d.dot(v)};
  }

  std::vector<std::string> problems() const;
};

struct Segment {
  Vec3 start;
  Vec3 end;
};

/// Circular arc: frame.origin + radius*(cos a * u + sin a * v) for
/// a in [startAngle, startAngle + sweep].
struct Arc {
  PlanarFrame frame;
  double radius = 1.0;
  double startAngle = 0.0;
  double sweep = kTwoPi;
};

using CurvePiece = std::variant<Segment, Arc>;

double piece_length(const CurvePiece& piece);
/// Point at local parameter t in [0,1], proportional to arclength.
Vec3 piece_point(const CurvePiece& piece, double t);
/// Unit tangent in the direction of traversal.
Vec3 piece_tangent(const CurvePiece& piece, double t);
inline Vec3 piece_start(const CurvePiece& p) { return piece_point(p, 0.0); }
inline Vec3 piece_end(const CurvePiece& p) { return piece_point(p, 1.0); }
inline bool is_arc(const CurvePiece& p) { return std::holds_alternative<Arc>(p); }

/// x -> scale * rotation * x + translation.
struct Similarity {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  static Similarity rotation_about(const Vec3& axis, double angle,
                                   const Vec3& center = Vec3::Zero());
  static Similarity translation_by(const Vec3& t);
  static Similarity scaling(double factor, const Vec3& center = Vec3::Zero());

  Vec3 apply(const Vec3& p) const { return scale * (rotation * p) + translation; }
  Vec3 apply_direction(const Vec3& d) const { return rotation * d; }
  /// this after other.
  Similarity compose(const Similarity& other) const;
};

class ArcSegCurve {
 public:
  ArcSegCurve() = default;
  explicit ArcSegCurve(std::vector<CurvePiece> pieces, bool closed = true);

  const std::vector<CurvePiece>& pieces() const { return pieces_; }
  bool closed() const { return closed_; }

  /// Invariant violations; empty for a valid curve.
  const std::vector<std::string>& problems() const { return problems_; }
  bool valid() const { return problems_.empty(); }
  /// Throws ErrorKind::Validation listing every problem.
  void validate() const;

  double length() const;
  /// Point at arclength fraction s in [0,1) measured from the start of piece 0.
  Vec3 point_at(double s) const;
  Vec3 tangent_at(double s) const;
  /// Index of the piece containing fraction s (the later piece on a boundary).
  std::size_t piece_index_at(double s) const;
  /// Cumulative arclength fractions at piece boundaries: size pieces()+1,
  /// front 0, back 1.
  std::vector<double> boundary_fractions() const;

  ArcSegCurve transformed(const Similarity& t) const;
  ArcSegCurve reversed() const;

 private:
  void locate(double s, std::size_t& index, double& local) const;

  std::vector<CurvePiece> pieces_;
  bool closed_ = true;
  std::vector<double> cumulative_;  // cumulative piece lengths, size n+1
  std::vector<std::string> problems_;
};

struct Polyline {
  std::vector<Vec3> vertices;
  bool closed = true;

  std::size_t edge_count() const {
    if (vertices.size() < 2) return 0;
    return closed ? vertices.size() : vertices.size() - 1;
  }
  const Vec3& edge_start(std::size_t i) const { return vertices[i]; }
  const Vec3& edge_end(std::size_t i) const {
    return vertices[(i + 1) % vertices.size()];
  }
  double length() const;
  std::vector<std::string> problems() const;
  Polyline transformed(const Similarity& t) const;
  Polyline reversed() const;
};

double curve_length(const ArcSegCurve& curve);
Vec3 point_at(const ArcSegCurve& curve, double s);

/// Inscribed polyline whose chords deviate from the curve by at most
/// max_chord_error. Every vertex lies on the curve.
Polyline discretize(const ArcSegCurve& curve, double max_chord_error);

/// n vertices at arclength fractions k/n.
Polyline sample_uniform(const ArcSegCurve& curve, std::size_t n);

/// Convex hull in counter-clockwise order starting at the lexicographically
/// smallest point; collinear points are dropped. A collinear input yields
/// its two extreme points.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Boundary of the radius-neighbourhood of the convex hull of centers,
/// lifted through frame. Starts with the arc at the first hull vertex and
/// alternates arc, segment counter-clockwise about frame.n.
ArcSegCurve offset_hull_boundary(const PlanarFrame& frame,
                                 std::span<const Vec2> centers, double radius);

}  // namespace gordian
