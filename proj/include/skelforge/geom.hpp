#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace skelforge {

// Collinearity / coincidence tolerance in canvas units.
inline constexpr double kEpsGeom = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  // Rejects NaN/Inf; use at input boundaries.
  static Point checked(double x, double y);

  Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
  Point& operator*=(double s) { x *= s; y *= s; return *this; }

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator-(Point a) { return {-a.x, -a.y}; }
  friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
  friend Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
  friend Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(Point a, Point b) = default;
};

using Vec2 = Point;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Vec2 perp_left(Vec2 a) { return {-a.y, a.x}; }
inline Point midpoint(Point a, Point b) { return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5}; }
inline Point lerp(Point a, Point b, double t) { return a + (b - a) * t; }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Unit vector along `v`; throws InvalidArgument for (near) zero vectors.
Vec2 normalized(Vec2 v);

struct Segment {
  Point a;
  Point b;

  Vec2 direction() const { return b - a; }
  double length() const { return distance(a, b); }
};

struct Ray {
  Point origin;
  Vec2 direction;  // |direction| == 1

  // Normalizes `dir`.
  static Ray make(Point origin, Vec2 dir);
  Point at(double s) const { return origin + direction * s; }
};

enum class Orientation { CCW, CW, Collinear };

Orientation orientation(Point a, Point b, Point c);

// Intersection point of two closed segments. Touching endpoints count; for
// overlapping collinear segments one point of the overlap is returned.
std::optional<Point> segment_intersect(const Segment& s1, const Segment& s2);

// True when the two closed segments share at least one point.
bool segments_touch(const Segment& s1, const Segment& s2);

double point_to_segment_distance(Point p, const Segment& s);
Point closest_point_on_segment(Point p, const Segment& s);

// Distance from p to the infinite line through s.a, s.b (distance to s.a when
// the segment is degenerate).
double point_to_line_distance(Point p, const Segment& s);

// Intersection of the lines through (p, p+d1) and (q, q+d2).
std::optional<Point> line_intersection(Point p, Vec2 d1, Point q, Vec2 d2);

// Smallest s >= 0 such that ray.at(s) lies on the segment, if any.
std::optional<double> ray_segment_hit(const Ray& ray, const Segment& s);

// Polygon helpers over a closed ring (last vertex connects to the first).
double signed_area(std::span<const Point> ring);
double perimeter(std::span<const Point> ring);
bool point_in_polygon(Point p, std::span<const Point> ring);
double distance_to_ring(Point p, std::span<const Point> ring);
double diameter(std::span<const Point> pts);
bool ring_is_simple(std::span<const Point> ring);

struct BoundingBox {
  Point min;
  Point max;
  double diagonal() const { return distance(min, max); }
};
BoundingBox bounding_box(std::span<const Point> pts);

// Rotation by `angle` radians followed by uniform `scale` and translation.
struct Transform2 {
  double tx = 0.0;
  double ty = 0.0;
  double rot = 0.0;
  double scale = 1.0;

  Point apply(Point p) const;
  Vec2 apply_vector(Vec2 v) const;
  Point inverse_apply(Point p) const;
  bool is_identity() const { return tx == 0.0 && ty == 0.0 && rot == 0.0 && scale == 1.0; }
  friend bool operator==(const Transform2&, const Transform2&) = default;
};

}  // namespace skelforge
