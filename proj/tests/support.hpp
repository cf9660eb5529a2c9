#pragma once

// Checks shared by the unit tests and the acceptance binary. Everything here
// is computed from geometry alone, never from engine internals.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "skelforge/fixtures.hpp"
#include "skelforge/skeleton.hpp"
#include "skelforge/sskel.hpp"

namespace support {

using namespace skelforge;

// Largest |dist(v, support line of e) - t| over skeleton vertices and their
// defining edges; -1 if some skeleton vertex has fewer than 3 defining edges.
inline double equidistance_error(const StraightSkeleton& ss) {
  double worst = 0.0;
  for (const SSVertex& v : ss.vertices) {
    if (v.kind != SSVertexKind::Skeleton) continue;
    if (v.defining_edges.size() < 3) return -1.0;
    for (std::size_t e : v.defining_edges) {
      const double d = point_to_line_distance(v.position, ss.source.edge(e));
      worst = std::max(worst, std::abs(d - v.time));
    }
  }
  return worst;
}

// Skeleton vertices and midpoints of interior edges inside the polygon.
inline bool contained(const StraightSkeleton& ss) {
  const auto ring = ss.source.vertices();
  for (const SSVertex& v : ss.vertices) {
    if (v.kind == SSVertexKind::Skeleton && !point_in_polygon(v.position, ring)) return false;
  }
  for (const SSEdge& e : ss.edges) {
    if (e.kind == SSEdgeKind::Border) continue;
    const Point m = midpoint(ss.vertices[e.from].position, ss.vertices[e.to].position);
    if (!point_in_polygon(m, ring) && distance_to_ring(m, ring) > 1e-9) return false;
  }
  return true;
}

// Number of faces of the straight embedding (outer face included), found by
// walking half-edges with neighbours sorted by angle.
inline std::size_t face_count(const StraightSkeleton& ss) {
  const std::size_t n = ss.vertices.size();
  std::vector<std::vector<std::size_t>> nbr(n);
  for (const SSEdge& e : ss.edges) {
    nbr[e.from].push_back(e.to);
    nbr[e.to].push_back(e.from);
  }
  auto angle = [&](std::size_t a, std::size_t b) {
    const Vec2 d = ss.vertices[b].position - ss.vertices[a].position;
    return std::atan2(d.y, d.x);
  };
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(nbr[v].begin(), nbr[v].end(),
              [&](std::size_t a, std::size_t b) { return angle(v, a) < angle(v, b); });
  }
  std::set<std::pair<std::size_t, std::size_t>> used;
  std::size_t faces = 0;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w : nbr[v]) {
      if (used.count({v, w})) continue;
      ++faces;
      std::size_t a = v, b = w;
      while (used.insert({a, b}).second) {
        // Next half-edge: at b, turn to the neighbour just clockwise of a.
        const auto& around = nbr[b];
        const auto it = std::find(around.begin(), around.end(), a);
        const std::size_t idx = static_cast<std::size_t>(it - around.begin());
        const std::size_t next = around[(idx + around.size() - 1) % around.size()];
        a = b;
        b = next;
      }
    }
  }
  return faces;
}

// V - E + F == 2 with F from the face walk, and one face per border edge.
inline bool euler_consistent(const StraightSkeleton& ss) {
  const long v = static_cast<long>(ss.vertices.size());
  const long e = static_cast<long>(ss.edges.size());
  const long f = static_cast<long>(face_count(ss));
  return v - e + f == 2 && f == static_cast<long>(ss.source.size()) + 1;
}

// Empty string when the extractor's interior graph equals the oracle's (after
// matching interior vertices by position within tol); otherwise a reason.
inline std::string compare_with_oracle(const StraightSkeleton& ss, const fixtures::OracleSkeleton& o, double tol) {
  const std::size_t n = ss.source.size();
  std::vector<std::size_t> mine, theirs;
  for (std::size_t i = n; i < ss.vertices.size(); ++i) mine.push_back(i);
  for (std::size_t i = n; i < o.nodes.size(); ++i) theirs.push_back(i);
  if (mine.size() != theirs.size()) {
    return "interior vertex count " + std::to_string(mine.size()) + " vs " + std::to_string(theirs.size());
  }
  std::map<std::size_t, std::size_t> to_oracle;
  std::set<std::size_t> taken;
  for (std::size_t i = 0; i < n; ++i) to_oracle[i] = i;
  for (std::size_t i : mine) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t j : theirs) {
      const double d = distance(ss.vertices[i].position, o.nodes[j].position);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best_d > tol) return "vertex " + std::to_string(i) + " is " + std::to_string(best_d) + " from the oracle";
    if (!taken.insert(best).second) return "two vertices match one oracle node";
    to_oracle[i] = best;
  }
  std::multiset<std::pair<std::size_t, std::size_t>> a, b;
  for (const SSEdge& e : ss.edges) {
    if (e.kind != SSEdgeKind::Border) a.insert(std::minmax(to_oracle[e.from], to_oracle[e.to]));
  }
  for (const auto& [x, y] : o.arcs) b.insert(std::minmax(x, y));
  if (a != b) return "edge sets differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")";
  return {};
}

// Joint ids of `skel` in sorted order.
inline std::vector<JointId> joint_ids(const Skeleton& skel) {
  std::vector<JointId> out;
  for (const auto& [id, j] : skel.joints()) out.push_back(id);
  return out;
}

// Bone pairs as a sorted list.
inline std::vector<std::pair<JointId, JointId>> bone_pairs(const Skeleton& skel) {
  std::vector<std::pair<JointId, JointId>> out;
  for (const Bone& b : skel.bones()) out.emplace_back(b.from, b.to);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace support
