#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "skelforge/geom.hpp"
#include "skelforge/stroke.hpp"

namespace skelforge {

enum class SSVertexKind { Border, Skeleton };
enum class SSEdgeKind { Border, Peripheral, Skeleton };
enum class WavefrontEventKind { Edge, Split };

struct SSVertex {
  Point position;
  double time = 0.0;
  SSVertexKind kind = SSVertexKind::Border;
  // Polygon edges whose offset lines meet here (sorted, unique).
  std::vector<std::size_t> defining_edges;
};

struct SSEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  SSEdgeKind kind = SSEdgeKind::Border;
};

// One processed topology change, in processing order.
struct WavefrontEvent {
  WavefrontEventKind kind = WavefrontEventKind::Edge;
  double time = 0.0;
  Point point;
  std::size_t vertex = 0;  // skeleton vertex created / reused for the event
};

// Kinetic trace of one active wavefront vertex, kept for debug rendering.
struct WavefrontTrace {
  Point origin;
  Vec2 velocity;
  double birth = 0.0;
  double death = 0.0;
  bool degenerate = false;
  Point at(double t) const { return degenerate ? origin : origin + velocity * (t - birth); }
};

// A pair of traces that were neighbours on the wavefront from `since` on.
struct WavefrontLink {
  std::size_t a = 0;
  std::size_t b = 0;
  double since = 0.0;
};

struct StraightSkeleton {
  SimplePolygon source;
  std::vector<SSVertex> vertices;  // border vertices first, in polygon order
  std::vector<SSEdge> edges;
  std::vector<WavefrontEvent> events;
  std::vector<WavefrontTrace> traces;
  std::vector<WavefrontLink> links;

  std::size_t count(SSVertexKind k) const;
  std::size_t count(SSEdgeKind k) const;
  std::size_t count(WavefrontEventKind k) const;

  // Offset polygon(s) at time t as a list of segments.
  std::vector<Segment> wavefront_at(double t) const;
};

// Inward angle bisector at `at`, shared by `prev_edge` (ending there) and
// `next_edge` (starting there), for a counter-clockwise contour.
Ray bisector(const Segment& prev_edge, const Segment& next_edge, Point at);

StraightSkeleton extract_straight_skeleton(const SimplePolygon& poly);

// Polygon black, wavefronts at `times` green, skeleton red.
std::string straight_skeleton_svg(const StraightSkeleton& ss, std::span<const double> times = {});

}  // namespace skelforge
