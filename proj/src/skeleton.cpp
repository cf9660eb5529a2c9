#include "skelforge/skeleton.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "skelforge/error.hpp"

namespace skelforge {

namespace {
const std::set<JointId> kNoNeighbors;
}

JointId Skeleton::add_joint(Point p, double radius, PartId part) {
  const JointId id = next_id_++;
  joints_[id] = Joint{id, p, radius, part};
  adj_[id];
  return id;
}

void Skeleton::insert_joint(const Joint& j) {
  if (joints_.count(j.id)) throw Error(ErrorCode::InvalidArgument, "duplicate joint id");
  joints_[j.id] = j;
  adj_[j.id];
  next_id_ = std::max(next_id_, j.id + 1);
}

void Skeleton::remove_joint(JointId id) {
  auto it = adj_.find(id);
  if (it == adj_.end()) throw Error(ErrorCode::InvalidArgument, "unknown joint");
  for (JointId n : it->second) adj_[n].erase(id);
  adj_.erase(it);
  joints_.erase(id);
}

void Skeleton::connect(JointId a, JointId b) {
  if (a == b) throw Error(ErrorCode::InvalidArgument, "bone needs two distinct joints");
  if (!has_joint(a) || !has_joint(b)) throw Error(ErrorCode::InvalidArgument, "unknown joint");
  adj_[a].insert(b);
  adj_[b].insert(a);
}

void Skeleton::disconnect(JointId a, JointId b) {
  if (!has_joint(a) || !has_joint(b)) return;
  adj_[a].erase(b);
  adj_[b].erase(a);
}

bool Skeleton::adjacent(JointId a, JointId b) const {
  auto it = adj_.find(a);
  return it != adj_.end() && it->second.count(b) != 0;
}

void Skeleton::contract(JointId a, JointId b, Point at) {
  if (a == b) {
    joint(a).position = at;
    return;
  }
  const std::set<JointId> moved = neighbors(b);
  Joint& ja = joint(a);
  ja.radius = 0.5 * (ja.radius + joint(b).radius);
  ja.position = at;
  remove_joint(b);
  for (JointId n : moved) {
    if (n != a) connect(a, n);
  }
}

const Joint& Skeleton::joint(JointId id) const {
  auto it = joints_.find(id);
  if (it == joints_.end()) throw Error(ErrorCode::InvalidArgument, "unknown joint");
  return it->second;
}

Joint& Skeleton::joint(JointId id) {
  auto it = joints_.find(id);
  if (it == joints_.end()) throw Error(ErrorCode::InvalidArgument, "unknown joint");
  return it->second;
}

const std::set<JointId>& Skeleton::neighbors(JointId id) const {
  auto it = adj_.find(id);
  return it == adj_.end() ? kNoNeighbors : it->second;
}

std::size_t Skeleton::bone_count() const {
  std::size_t twice = 0;
  for (const auto& [id, ns] : adj_) twice += ns.size();
  return twice / 2;
}

std::vector<Bone> Skeleton::bones() const {
  std::vector<Bone> out;
  for (const auto& [id, ns] : adj_) {
    for (JointId n : ns) {
      if (id < n) out.push_back({id, n, distance(joints_.at(id).position, joints_.at(n).position)});
    }
  }
  return out;
}

double Skeleton::mean_bone_length() const {
  const auto bs = bones();
  if (bs.empty()) return 0.0;
  double acc = 0.0;
  for (const Bone& b : bs) acc += b.length;
  return acc / static_cast<double>(bs.size());
}

JointKind Skeleton::kind(JointId id) const {
  switch (degree(id)) {
    case 0: return JointKind::Isolated;
    case 1: return JointKind::Terminal;
    case 2: return JointKind::Sleeve;
    default: return JointKind::Junction;
  }
}

std::vector<std::vector<JointId>> Skeleton::components() const {
  std::vector<std::vector<JointId>> out;
  std::set<JointId> seen;
  for (const auto& [start, j] : joints_) {
    if (seen.count(start)) continue;
    std::vector<JointId> comp;
    std::vector<JointId> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      const JointId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (JointId n : neighbors(v)) {
        if (seen.insert(n).second) stack.push_back(n);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool Skeleton::is_forest() const {
  return bone_count() + components().size() == joint_count();
}

Skeleton from_straight_skeleton(const StraightSkeleton& ss) {
  Skeleton skel;
  std::vector<JointId> ids(ss.vertices.size(), std::numeric_limits<JointId>::max());
  for (std::size_t i = 0; i < ss.vertices.size(); ++i) {
    if (ss.vertices[i].kind == SSVertexKind::Skeleton) ids[i] = skel.add_joint(ss.vertices[i].position);
  }
  if (skel.empty()) throw Error(ErrorCode::EmptySkeleton, "straight skeleton has no interior vertices");
  for (const SSEdge& e : ss.edges) {
    if (e.kind == SSEdgeKind::Skeleton) skel.connect(ids[e.from], ids[e.to]);
  }
  return skel;
}

Skeleton collapse_short_edges(Skeleton skel, double factor, const SimplePolygon* region) {
  for (;;) {
    const auto bs = skel.bones();
    if (bs.empty()) break;
    double mean = 0.0;
    for (const Bone& b : bs) mean += b.length;
    mean /= static_cast<double>(bs.size());
    const Bone* shortest = &bs.front();
    for (const Bone& b : bs) {
      if (b.length < shortest->length) shortest = &b;
    }
    if (!(shortest->length < factor * mean)) break;
    const Point a = skel.joint(shortest->from).position;
    const Point b = skel.joint(shortest->to).position;
    Point at = midpoint(a, b);
    if (region) {
      const auto ring = region->vertices();
      if (!point_in_polygon(at, ring)) at = distance_to_ring(a, ring) >= distance_to_ring(b, ring) ? a : b;
    }
    skel.contract(shortest->from, shortest->to, at);
  }
  return skel;
}

Skeleton renumbered(const Skeleton& skel) {
  Skeleton out;
  std::map<JointId, JointId> ids;
  for (const auto& [id, j] : skel.joints()) ids[id] = out.add_joint(j.position, j.radius, j.part);
  for (const Bone& b : skel.bones()) out.connect(ids[b.from], ids[b.to]);
  return out;
}

std::vector<Branch> branches(const Skeleton& skel) {
  std::vector<Branch> out;
  std::set<std::pair<JointId, JointId>> used;
  auto mark = [&](JointId a, JointId b) { return used.insert(std::minmax(a, b)).second; };

  for (const auto& [start, j] : skel.joints()) {
    if (skel.degree(start) == 2) continue;
    for (JointId first : skel.neighbors(start)) {
      if (!mark(start, first)) continue;
      Branch br{{start, first}};
      JointId prev = start;
      JointId cur = first;
      while (skel.degree(cur) == 2) {
        const auto& ns = skel.neighbors(cur);
        const JointId nxt = *ns.begin() == prev ? *std::next(ns.begin()) : *ns.begin();
        if (!mark(cur, nxt)) break;
        br.joints.push_back(nxt);
        prev = cur;
        cur = nxt;
      }
      out.push_back(std::move(br));
    }
  }
  return out;
}

double branch_length(const Skeleton& skel, const Branch& b) {
  double acc = 0.0;
  for (std::size_t i = 1; i < b.joints.size(); ++i) {
    acc += distance(skel.joint(b.joints[i - 1]).position, skel.joint(b.joints[i]).position);
  }
  return acc;
}

namespace {

std::string encode(const Skeleton& skel, JointId v, JointId parent) {
  std::vector<std::string> kids;
  for (JointId n : skel.neighbors(v)) {
    if (n != parent) kids.push_back(encode(skel, n, v));
  }
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (const auto& k : kids) s += k;
  return s + ")";
}

// Rooted at the tree center(s); bicentral trees take the smaller encoding.
std::string encode_tree(const Skeleton& skel, const std::vector<JointId>& comp) {
  std::map<JointId, std::size_t> deg;
  for (JointId v : comp) deg[v] = skel.degree(v);
  std::vector<JointId> layer;
  for (JointId v : comp) {
    if (deg[v] <= 1) layer.push_back(v);
  }
  std::size_t remaining = comp.size();
  while (remaining > 2 && !layer.empty()) {
    remaining -= layer.size();
    std::vector<JointId> next;
    for (JointId v : layer) {
      for (JointId n : skel.neighbors(v)) {
        if (--deg[n] == 1) next.push_back(n);
      }
    }
    layer = std::move(next);
  }
  std::string best;
  for (JointId c : layer) {
    std::string e = encode(skel, c, std::numeric_limits<JointId>::max());
    if (best.empty() || e < best) best = e;
  }
  return best;
}

}  // namespace

std::string canonical_topology(const Skeleton& skel) {
  if (!skel.is_forest()) throw Error(ErrorCode::InvalidArgument, "skeleton has a cycle");
  std::vector<std::string> trees;
  for (const auto& comp : skel.components()) trees.push_back(encode_tree(skel, comp));
  std::sort(trees.begin(), trees.end());
  std::string out;
  for (const auto& t : trees) out += t;
  return out;
}

}  // namespace skelforge
