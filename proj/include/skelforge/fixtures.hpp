#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "skelforge/geom.hpp"
#include "skelforge/stroke.hpp"

namespace skelforge::fixtures {

// Star-shaped polygon around the origin: n angles jittered inside their
// sectors, radii radius * (1 +/- jitter). Deterministic per seed.
SimplePolygon gen_star_polygon(std::uint64_t seed, std::size_t n, double jitter = 0.5, double radius = 100.0);

// Closed stroke tracing `outline` with points every `spacing` units, each
// displaced by up to `jitter` (uniform, seeded).
RawStroke outline_stroke(const std::vector<Point>& outline, double spacing, double jitter = 0.0,
                         std::uint64_t seed = 0);

std::vector<Point> ellipse_outline(Point center, double rx, double ry, double rot = 0.0, std::size_t n = 64);
// Rounded rectangle around segment a-b with the given half-width.
std::vector<Point> capsule_outline(Point a, Point b, double half_width, std::size_t cap_points = 8);

// Tube around a smooth axis: straight, arc or S-shaped depending on the seed.
struct Tube {
  SimplePolygon polygon;
  std::vector<Point> axis;  // joints along the axis, strictly inside the tube
  double width = 0.0;       // nominal diameter
};
Tube gen_tube(std::uint64_t seed);

// Torso followed by limbs overlapping it (and occasionally a detached part),
// in modeling order.
std::vector<RawStroke> gen_scene_strokes(std::uint64_t seed);

// Brute force: best of n uniform samples of the segment, then a ternary
// search between that sample's neighbours.
double min_distance_oracle(Point p, const Segment& s, std::size_t n_samples = 10001);

struct OracleNode {
  Point position;
  double time = 0.0;
  bool border = false;
};

struct OracleSkeleton {
  std::vector<OracleNode> nodes;  // polygon vertices first
  std::vector<std::pair<std::size_t, std::size_t>> arcs;  // interior arcs, no border edges
  std::size_t split_events = 0;
};

// Straight skeleton by explicit time stepping of the offset polygon: every
// step of `dt` checks each wavefront edge length and each reflex vertex
// against the other wavefront edges, bisects the first sign change and
// rebuilds the loops at that instant. Throws OracleResolution when the
// rebuild cannot make progress.
OracleSkeleton wavefront_oracle(const SimplePolygon& poly, double dt);

// Writes polygons/, scenes/ and expected/ under `root`. Every expected value
// carries a provenance string. Returns the number of files written.
std::size_t write_corpus(const std::filesystem::path& root, std::uint64_t seed);

}  // namespace skelforge::fixtures
