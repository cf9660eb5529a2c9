#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "skelforge/geom.hpp"

namespace skelforge {

struct RawStroke {
  std::vector<Point> points;
  bool closed = true;
};

// A counter-clockwise, non-self-intersecting, hole-free contour with at least
// three vertices. Construction validates every invariant.
class SimplePolygon {
 public:
  SimplePolygon() = default;

  // Throws SelfIntersecting or InvalidArgument; does not reorient.
  static SimplePolygon from_vertices(std::vector<Point> vertices);

  // Reverses clockwise input before validating.
  static SimplePolygon from_any_orientation(std::vector<Point> vertices);

  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  const Point& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  // Edge i runs from vertex i to vertex i+1.
  Segment edge(std::size_t i) const { return {vertex(i), vertex(i + 1)}; }

  double perimeter() const { return perimeter_; }
  double area() const { return signed_area(vertices_); }
  double diameter() const { return skelforge::diameter(vertices_); }

  SimplePolygon transformed(const Transform2& t) const;

 private:
  explicit SimplePolygon(std::vector<Point> v);

  std::vector<Point> vertices_;
  double perimeter_ = 0.0;
};

struct StrokeConfig {
  double step = 10.0;
  double eps_poly = 3.0;
};

// Resamples the closed stroke into floor(perimeter / step) points spaced evenly
// along its arclength, starting at the first stroke point.
std::vector<Point> uniform_discretize(const RawStroke& stroke, double step);

// Open-polyline Douglas-Peucker. Both endpoints are kept; eps <= 0 returns the
// input unchanged.
std::vector<Point> dp_simplify(std::span<const Point> points, double eps);

// Indices retained by dp_simplify (sorted, endpoints included).
std::vector<std::size_t> dp_simplify_indices(std::span<const Point> points, double eps);

// Closed-loop variant: anchors at the farthest-apart pair, simplifies both halves.
std::vector<Point> dp_simplify_closed(std::span<const Point> ring, double eps);

// Removes small loops (at most `max_loop_fraction` of the perimeter) cut off at
// self-crossings, one pass. Returns the repaired ring.
std::vector<Point> remove_small_loops(std::span<const Point> ring, double max_loop_fraction = 0.1);

SimplePolygon acquire_polygon(const RawStroke& stroke, const StrokeConfig& config = {});

}  // namespace skelforge
