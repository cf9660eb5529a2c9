#include "skelforge/stroke.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "skelforge/error.hpp"

namespace skelforge {

SimplePolygon::SimplePolygon(std::vector<Point> v)
    : vertices_(std::move(v)), perimeter_(skelforge::perimeter(vertices_)) {}

SimplePolygon SimplePolygon::from_vertices(std::vector<Point> vertices) {
  for (const Point& p : vertices) {
    if (!is_finite(p)) throw Error(ErrorCode::InvalidArgument, "polygon vertex is not finite");
  }
  if (vertices.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "polygon needs at least 3 vertices");
  }
  if (!ring_is_simple(vertices)) {
    throw Error(ErrorCode::SelfIntersecting, "polygon is not simple");
  }
  if (signed_area(vertices) <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "polygon must be counter-clockwise");
  }
  return SimplePolygon(std::move(vertices));
}

SimplePolygon SimplePolygon::from_any_orientation(std::vector<Point> vertices) {
  if (signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  return from_vertices(std::move(vertices));
}

SimplePolygon SimplePolygon::transformed(const Transform2& t) const {
  std::vector<Point> out;
  out.reserve(vertices_.size());
  for (const Point& p : vertices_) out.push_back(t.apply(p));
  return SimplePolygon(std::move(out));
}

std::vector<Point> uniform_discretize(const RawStroke& stroke, double step) {
  if (!stroke.closed) throw Error(ErrorCode::DegenerateStroke, "stroke must be closed");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");

  std::vector<Point> pts;
  pts.reserve(stroke.points.size());
  for (const Point& p : stroke.points) {
    if (!is_finite(p)) throw Error(ErrorCode::InvalidArgument, "stroke point is not finite");
    if (pts.empty() || distance(pts.back(), p) > 0.0) pts.push_back(p);
  }
  while (pts.size() > 1 && distance(pts.back(), pts.front()) == 0.0) pts.pop_back();
  if (pts.size() < 3) throw Error(ErrorCode::DegenerateStroke, "closed stroke needs at least 3 points");

  const double total = skelforge::perimeter(pts);
  if (total <= 2.0 * step) {
    throw Error(ErrorCode::DegenerateStroke, "stroke perimeter is not larger than twice the step");
  }
  const auto count = static_cast<std::size_t>(std::floor(total / step + 1e-9));
  const double spacing = total / static_cast<double>(count);

  std::vector<Point> out;
  out.reserve(count);
  std::size_t seg = 0;
  double seg_start = 0.0;
  double seg_len = distance(pts[0], pts[1]);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = spacing * static_cast<double>(i);
    while (seg + 1 < pts.size() && s > seg_start + seg_len) {
      seg_start += seg_len;
      ++seg;
      seg_len = distance(pts[seg], pts[(seg + 1) % pts.size()]);
    }
    const double t = seg_len > 0.0 ? std::clamp((s - seg_start) / seg_len, 0.0, 1.0) : 0.0;
    out.push_back(lerp(pts[seg], pts[(seg + 1) % pts.size()], t));
  }
  return out;
}

std::vector<std::size_t> dp_simplify_indices(std::span<const Point> points, double eps) {
  const std::size_t n = points.size();
  std::vector<std::size_t> out;
  if (n == 0) return out;
  if (n <= 2 || eps <= 0.0) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  std::vector<char> keep(n, 0);
  keep.front() = keep.back() = 1;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, n - 1}};
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi <= lo + 1) continue;
    const Segment chord{points[lo], points[hi]};
    double best = -1.0;
    std::size_t best_i = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double d = point_to_segment_distance(points[i], chord);
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    if (best > eps) {
      keep[best_i] = 1;
      stack.emplace_back(lo, best_i);
      stack.emplace_back(best_i, hi);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
}

std::vector<Point> dp_simplify(std::span<const Point> points, double eps) {
  std::vector<Point> out;
  for (std::size_t i : dp_simplify_indices(points, eps)) out.push_back(points[i]);
  return out;
}

std::vector<Point> dp_simplify_closed(std::span<const Point> ring, double eps) {
  const std::size_t n = ring.size();
  if (n <= 3 || eps <= 0.0) return {ring.begin(), ring.end()};

  // The farthest pair lies on the convex hull (monotone chain, strict turns).
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ring[a].x != ring[b].x ? ring[a].x < ring[b].x : ring[a].y < ring[b].y;
  });
  std::vector<std::size_t> hull;
  auto turns_left = [&](std::size_t a, std::size_t b, std::size_t c) {
    return cross(ring[b] - ring[a], ring[c] - ring[a]) > 0.0;
  };
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (std::size_t i : order) {
      while (hull.size() >= base + 2 && !turns_left(hull[hull.size() - 2], hull.back(), i)) hull.pop_back();
      hull.push_back(i);
    }
    hull.pop_back();
    std::reverse(order.begin(), order.end());
  }
  std::sort(hull.begin(), hull.end());
  hull.erase(std::unique(hull.begin(), hull.end()), hull.end());

  std::size_t ia = 0;
  std::size_t ib = 1;
  double best = -1.0;
  for (std::size_t hi = 0; hi < hull.size(); ++hi) {
    for (std::size_t hj = hi + 1; hj < hull.size(); ++hj) {
      const std::size_t i = hull[hi], j = hull[hj];
      const double d = distance(ring[i], ring[j]);
      if (d > best) {
        best = d;
        ia = i;
        ib = j;
      }
    }
  }

  std::vector<Point> first(ring.begin() + static_cast<std::ptrdiff_t>(ia),
                           ring.begin() + static_cast<std::ptrdiff_t>(ib) + 1);
  std::vector<Point> second(ring.begin() + static_cast<std::ptrdiff_t>(ib), ring.end());
  second.insert(second.end(), ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(ia) + 1);

  std::vector<Point> out = dp_simplify(first, eps);
  out.pop_back();
  std::vector<Point> tail = dp_simplify(second, eps);
  out.insert(out.end(), tail.begin(), tail.end() - 1);
  return out;
}

std::vector<Point> remove_small_loops(std::span<const Point> ring_in, double max_loop_fraction) {
  std::vector<Point> ring(ring_in.begin(), ring_in.end());
  const double total = skelforge::perimeter(ring);

  auto arclength = [&](std::size_t from, std::size_t to) {
    double acc = 0.0;
    for (std::size_t k = from; k < to; ++k) acc += distance(ring[k], ring[k + 1]);
    return acc;
  };

  for (;;) {
    const std::size_t n = ring.size();
    bool changed = false;
    for (std::size_t i = 0; i < n && !changed; ++i) {
      const Segment ei{ring[i], ring[(i + 1) % n]};
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        const Segment ej{ring[j], ring[(j + 1) % n]};
        const auto hit = segment_intersect(ei, ej);
        if (!hit) continue;
        // Loop A: ring[i+1..j] plus the crossing; loop B: the rest.
        const double loop_a = distance(*hit, ring[i + 1]) + arclength(i + 1, j) + distance(ring[j], *hit);
        const double loop_b = total - loop_a;
        if (std::min(loop_a, loop_b) > max_loop_fraction * total) return ring;
        std::vector<Point> next;
        if (loop_a <= loop_b) {
          next.assign(ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(i) + 1);
          next.push_back(*hit);
          next.insert(next.end(), ring.begin() + static_cast<std::ptrdiff_t>(j) + 1, ring.end());
        } else {
          next.push_back(*hit);
          next.insert(next.end(), ring.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                      ring.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        }
        std::vector<Point> dedup;
        for (const Point& p : next) {
          if (dedup.empty() || distance(dedup.back(), p) > kEpsGeom) dedup.push_back(p);
        }
        while (dedup.size() > 1 && distance(dedup.back(), dedup.front()) <= kEpsGeom) dedup.pop_back();
        ring = std::move(dedup);
        changed = true;
        break;
      }
    }
    if (!changed || ring.size() < 3) return ring;
  }
}

SimplePolygon acquire_polygon(const RawStroke& stroke, const StrokeConfig& config) {
  std::vector<Point> ring = uniform_discretize(stroke, config.step);
  if (!ring_is_simple(ring)) {
    ring = remove_small_loops(ring);
    if (ring.size() < 3 || !ring_is_simple(ring)) {
      throw Error(ErrorCode::SelfIntersecting, "stroke crosses itself");
    }
  }
  if (signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());

  // DP can pinch narrow necks; tighten the tolerance a few times before giving up.
  double eps = config.eps_poly;
  for (int attempt = 0; attempt < 5; ++attempt, eps *= 0.5) {
    std::vector<Point> simplified = dp_simplify_closed(ring, eps);
    if (simplified.size() >= 3 && ring_is_simple(simplified) && signed_area(simplified) > 0.0) {
      return SimplePolygon::from_vertices(std::move(simplified));
    }
  }
  throw Error(ErrorCode::SelfIntersecting, "simplified contour is not simple");
}

}  // namespace skelforge
