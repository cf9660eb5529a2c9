#include "skelforge/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "skelforge/error.hpp"

namespace skelforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateStroke: return "DegenerateStroke";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::NumericalCollapse: return "NumericalCollapse";
    case ErrorCode::EmptySkeleton: return "EmptySkeleton";
    case ErrorCode::DegenerateSlice: return "DegenerateSlice";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::SliceMiss: return "SliceMiss";
    case ErrorCode::UnknownPart: return "UnknownPart";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::OracleResolution: return "OracleResolution";
  }
  return "Unknown";
}

Point Point::checked(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
  }
  return {x, y};
}

Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
  }
  return v / n;
}

Ray Ray::make(Point origin, Vec2 dir) { return Ray{origin, normalized(dir)}; }

Orientation orientation(Point a, Point b, Point c) {
  const double area2 = cross(b - a, c - a);
  if (std::abs(area2) <= kEpsGeom) return Orientation::Collinear;
  return area2 > 0.0 ? Orientation::CCW : Orientation::CW;
}

namespace {

bool on_segment(Point p, const Segment& s) {
  return std::min(s.a.x, s.b.x) - kEpsGeom <= p.x && p.x <= std::max(s.a.x, s.b.x) + kEpsGeom &&
         std::min(s.a.y, s.b.y) - kEpsGeom <= p.y && p.y <= std::max(s.a.y, s.b.y) + kEpsGeom;
}

}  // namespace

std::optional<Point> segment_intersect(const Segment& s1, const Segment& s2) {
  const Orientation o1 = orientation(s1.a, s1.b, s2.a);
  const Orientation o2 = orientation(s1.a, s1.b, s2.b);
  const Orientation o3 = orientation(s2.a, s2.b, s1.a);
  const Orientation o4 = orientation(s2.a, s2.b, s1.b);

  if (o1 != o2 && o3 != o4 && o1 != Orientation::Collinear && o2 != Orientation::Collinear &&
      o3 != Orientation::Collinear && o4 != Orientation::Collinear) {
    const Vec2 r = s1.direction();
    const Vec2 q = s2.direction();
    const double t = cross(s2.a - s1.a, q) / cross(r, q);
    return s1.a + r * t;
  }
  // Touching / collinear cases: report the touching endpoint.
  if (o1 == Orientation::Collinear && on_segment(s2.a, s1)) return s2.a;
  if (o2 == Orientation::Collinear && on_segment(s2.b, s1)) return s2.b;
  if (o3 == Orientation::Collinear && on_segment(s1.a, s2)) return s1.a;
  if (o4 == Orientation::Collinear && on_segment(s1.b, s2)) return s1.b;
  return std::nullopt;
}

bool segments_touch(const Segment& s1, const Segment& s2) {
  return segment_intersect(s1, s2).has_value();
}

Point closest_point_on_segment(Point p, const Segment& s) {
  const Vec2 d = s.direction();
  const double len2 = dot(d, d);
  if (len2 == 0.0) return s.a;
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return s.a + d * t;
}

double point_to_segment_distance(Point p, const Segment& s) {
  const Vec2 d = s.direction();
  if (dot(p - s.a, d) <= 0.0) return distance(p, s.a);
  if (dot(p - s.b, -d) <= 0.0) return distance(p, s.b);
  return std::abs(cross(d, p - s.a)) / norm(d);
}

double point_to_line_distance(Point p, const Segment& s) {
  const Vec2 d = s.direction();
  const double len = norm(d);
  if (len == 0.0) return distance(p, s.a);
  return std::abs(cross(d, p - s.a)) / len;
}

std::optional<Point> line_intersection(Point p, Vec2 d1, Point q, Vec2 d2) {
  const double denom = cross(d1, d2);
  if (std::abs(denom) <= 1e-15 * norm(d1) * norm(d2)) return std::nullopt;
  const double t = cross(q - p, d2) / denom;
  return p + d1 * t;
}

std::optional<double> ray_segment_hit(const Ray& ray, const Segment& s) {
  const Vec2 e = s.direction();
  const double denom = cross(ray.direction, e);
  if (denom * denom <= 1e-30 * dot(e, e)) return std::nullopt;  // parallel
  const Vec2 w = s.a - ray.origin;
  const double t = cross(w, e) / denom;               // along the ray
  const double u = cross(w, ray.direction) / denom;   // along the segment
  if (t < 0.0 || u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
  return t;
}

double signed_area(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * acc;
}

double perimeter(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += distance(ring[i], ring[(i + 1) % n]);
  return acc;
}

bool point_in_polygon(Point p, std::span<const Point> ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring[i];
    const Point b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_ring(Point p, std::span<const Point> ring) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_to_segment_distance(p, {ring[i], ring[(i + 1) % n]}));
  }
  return best;
}

double diameter(std::span<const Point> pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, distance(pts[i], pts[j]));
  }
  return best;
}

namespace {

// False if vertices i and j coincide or edges i and j touch illegally.
bool edge_pair_ok(std::span<const Point> ring, std::size_t i, std::size_t j) {
  const std::size_t n = ring.size();
  if (i > j) std::swap(i, j);
  if (distance(ring[i], ring[j]) <= kEpsGeom) return false;
  const Segment ei{ring[i], ring[(i + 1) % n]};
  const Segment ej{ring[j], ring[(j + 1) % n]};
  const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
  if (adjacent) {
    // Adjacent edges may only share their common vertex: reject folds.
    const Point shared = (j == i + 1) ? ei.b : ei.a;
    const Point pi = (j == i + 1) ? ei.a : ei.b;
    const Point pj = (j == i + 1) ? ej.b : ej.a;
    return !(orientation(pi, shared, pj) == Orientation::Collinear && dot(pi - shared, pj - shared) > 0.0);
  }
  return !segments_touch(ei, ej);
}

}  // namespace

bool ring_is_simple(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  if (n <= 64) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!edge_pair_ok(ring, i, j)) return false;
      }
    }
    return true;
  }

  // Uniform grid over edge bounding boxes; only edges sharing a cell are
  // tested, each pair once in the first cell both boxes cover.
  const BoundingBox box = bounding_box(ring);
  const double w = box.max.x - box.min.x, h = box.max.y - box.min.y;
  const double cell = std::max({2.0 * perimeter(ring) / static_cast<double>(n),
                                std::sqrt(w * h / (4.0 * static_cast<double>(n))), kEpsGeom * 4});
  const auto nx = static_cast<long>(w / cell) + 1, ny = static_cast<long>(h / cell) + 1;
  auto cell_of = [&](double x, double y) {
    return std::pair<long, long>{std::clamp(static_cast<long>((x - box.min.x) / cell), 0L, nx - 1),
                                 std::clamp(static_cast<long>((y - box.min.y) / cell), 0L, ny - 1)};
  };
  struct Range {
    long x0, y0, x1, y1;
  };
  std::vector<Range> ranges(n);
  std::vector<std::vector<std::uint32_t>> grid(static_cast<std::size_t>(nx * ny));
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % n];
    const auto [x0, y0] = cell_of(std::min(a.x, b.x) - kEpsGeom, std::min(a.y, b.y) - kEpsGeom);
    const auto [x1, y1] = cell_of(std::max(a.x, b.x) + kEpsGeom, std::max(a.y, b.y) + kEpsGeom);
    ranges[i] = {x0, y0, x1, y1};
    for (long y = y0; y <= y1; ++y) {
      for (long x = x0; x <= x1; ++x) grid[static_cast<std::size_t>(y * nx + x)].push_back(static_cast<std::uint32_t>(i));
    }
  }
  for (long y = 0; y < ny; ++y) {
    for (long x = 0; x < nx; ++x) {
      const auto& bucket = grid[static_cast<std::size_t>(y * nx + x)];
      for (std::size_t p = 0; p < bucket.size(); ++p) {
        for (std::size_t q = p + 1; q < bucket.size(); ++q) {
          const Range& ri = ranges[bucket[p]];
          const Range& rj = ranges[bucket[q]];
          if (x != std::max(ri.x0, rj.x0) || y != std::max(ri.y0, rj.y0)) continue;
          if (!edge_pair_ok(ring, bucket[p], bucket[q])) return false;
        }
      }
    }
  }
  return true;
}

BoundingBox bounding_box(std::span<const Point> pts) {
  BoundingBox box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
                  {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const Point& p : pts) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

Point Transform2::apply(Point p) const {
  const Vec2 v = apply_vector(p);
  return {v.x + tx, v.y + ty};
}

Vec2 Transform2::apply_vector(Vec2 v) const {
  const double c = std::cos(rot);
  const double s = std::sin(rot);
  return {scale * (c * v.x - s * v.y), scale * (s * v.x + c * v.y)};
}

Point Transform2::inverse_apply(Point p) const {
  const double c = std::cos(rot);
  const double s = std::sin(rot);
  const double x = (p.x - tx) / scale;
  const double y = (p.y - ty) / scale;
  return {c * x + s * y, -s * x + c * y};
}

}  // namespace skelforge
