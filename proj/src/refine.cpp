#include "skelforge/refine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "skelforge/error.hpp"

namespace skelforge {

namespace {

constexpr int kMaxRounds = 16;

bool in_scope(const Skeleton& skel, JointId id, const RefineScope& scope) {
  return scope.kind != ScopeKind::Subpart || skel.joint(id).part == scope.part;
}

// Same-part runs of a branch; consecutive runs share no joints.
std::vector<Branch> part_runs(const Skeleton& skel, const Branch& b) {
  std::vector<Branch> runs;
  for (JointId id : b.joints) {
    if (runs.empty() || skel.joint(runs.back().joints.back()).part != skel.joint(id).part) runs.push_back({});
    runs.back().joints.push_back(id);
  }
  return runs;
}

// Runs (ids and positions) already simplified without effect. The result of
// a run depends only on these, so later rounds can skip them.
using SettledRuns = std::set<std::vector<double>>;

std::vector<double> run_key(const Skeleton& skel, const Branch& run) {
  std::vector<double> key;
  for (JointId id : run.joints) {
    const Point p = skel.joint(id).position;
    key.insert(key.end(), {static_cast<double>(id), p.x, p.y});
  }
  return key;
}

bool simplify_in_place(Skeleton& skel, const Branch& branch, const PartPolygons& polys, double eps_s,
                       const BoundedDPConfig& bdp, std::optional<PartId> only_part, SettledRuns* settled = nullptr) {
  if (!(eps_s > 0.0)) return false;
  bool changed = false;
  for (const Branch& run : part_runs(skel, branch)) {
    if (run.joints.size() < 3) continue;  // nothing between the ends to drop
    const PartId part = skel.joint(run.joints.front()).part;
    if (only_part && part != *only_part) continue;
    const auto poly = polys.find(part);
    if (poly == polys.end()) continue;
    std::vector<double> key;
    if (settled) {
      key = run_key(skel, run);
      if (settled->count(key)) continue;
    }
    try {
      const auto done = bounded_dp(skel, run, poly->second, bdp, eps_s);
      // Equal joint counts keep the current joints so repeated passes settle.
      if (done && done->result.polyline.size() != run.joints.size()) {
        replace_branch(skel, run, done->result.polyline);
        changed = true;
      } else if (settled && done) {
        settled->insert(std::move(key));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateSlice) throw;
      if (settled) settled->insert(std::move(key));
    }
  }
  return changed;
}

bool simplify_scope(Skeleton& skel, const PartPolygons& polys, double eps_s, const BoundedDPConfig& bdp,
                    const RefineScope& scope, SettledRuns& settled) {
  std::optional<PartId> only;
  if (scope.kind == ScopeKind::Subpart) only = scope.part;
  bool changed = false;
  for (const Branch& b : branches(skel)) changed |= simplify_in_place(skel, b, polys, eps_s, bdp, only, &settled);
  return changed;
}

// Smallest subtree of the (tree) component spanning `members`.
std::vector<JointId> steiner_nodes(const Skeleton& skel, const std::vector<JointId>& members) {
  std::set<JointId> comp;
  std::vector<JointId> stack{members.front()};
  comp.insert(members.front());
  while (!stack.empty()) {
    const JointId v = stack.back();
    stack.pop_back();
    for (JointId n : skel.neighbors(v)) {
      if (comp.insert(n).second) stack.push_back(n);
    }
  }
  const std::set<JointId> keep(members.begin(), members.end());
  std::map<JointId, std::size_t> deg;
  std::deque<JointId> leaves;
  for (JointId v : comp) {
    deg[v] = skel.degree(v);
    if (deg[v] <= 1 && !keep.count(v)) leaves.push_back(v);
  }
  std::set<JointId> removed;
  while (!leaves.empty()) {
    const JointId v = leaves.front();
    leaves.pop_front();
    removed.insert(v);
    for (JointId n : skel.neighbors(v)) {
      if (removed.count(n)) continue;
      if (--deg[n] == 1 && !keep.count(n)) leaves.push_back(n);
    }
  }
  std::vector<JointId> out;
  for (JointId v : comp) {
    if (!removed.count(v)) out.push_back(v);
  }
  return out;
}

bool merge_in_place(Skeleton& skel, double eps_m, const RefineScope& scope) {
  if (!(eps_m > 0.0)) return false;
  std::map<JointId, std::size_t> comp_of;
  const auto comps = skel.components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (JointId v : comps[c]) comp_of[v] = c;
  }
  std::vector<JointId> junctions;
  for (const auto& [id, j] : skel.joints()) {
    if (skel.degree(id) >= 3 && in_scope(skel, id, scope)) junctions.push_back(id);
  }
  // Breadth-first clustering over the "closer than eps_m" graph.
  std::vector<std::vector<JointId>> clusters;
  std::set<JointId> seen;
  for (JointId start : junctions) {
    if (seen.count(start)) continue;
    std::vector<JointId> cluster;
    std::deque<JointId> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      const JointId v = queue.front();
      queue.pop_front();
      cluster.push_back(v);
      for (JointId w : junctions) {
        if (seen.count(w) || comp_of[w] != comp_of[v]) continue;
        if (distance(skel.joint(v).position, skel.joint(w).position) < eps_m) {
          seen.insert(w);
          queue.push_back(w);
        }
      }
    }
    if (cluster.size() >= 2) clusters.push_back(std::move(cluster));
  }

  bool changed = false;
  for (auto cluster : clusters) {
    std::erase_if(cluster, [&skel](JointId v) { return !skel.has_joint(v); });
    if (cluster.size() < 2) continue;
    std::sort(cluster.begin(), cluster.end());
    const auto nodes = steiner_nodes(skel, cluster);
    if (std::any_of(nodes.begin(), nodes.end(), [&](JointId v) { return !in_scope(skel, v, scope); })) continue;
    Point centroid;
    for (JointId v : cluster) centroid += skel.joint(v).position;
    centroid = centroid / static_cast<double>(cluster.size());
    const JointId keeper = cluster.front();
    // Contract outward from the keeper so every step merges adjacent joints.
    std::set<JointId> pending(nodes.begin(), nodes.end());
    pending.erase(keeper);
    while (!pending.empty()) {
      JointId next = *pending.begin();
      for (JointId n : skel.neighbors(keeper)) {
        if (pending.count(n)) {
          next = n;
          break;
        }
      }
      skel.contract(keeper, next, centroid);
      pending.erase(next);
    }
    skel.joint(keeper).position = centroid;
    changed = true;
  }
  return changed;
}

bool prune_in_place(Skeleton& skel, double eps_t, const RefineScope& scope) {
  if (!(eps_t > 0.0)) return false;
  bool changed = false;
  const std::size_t limit = skel.bone_count() + 1;
  for (std::size_t round = 0; round < limit; ++round) {
    std::optional<Branch> victim;
    double victim_len = std::numeric_limits<double>::infinity();
    for (Branch b : branches(skel)) {
      const std::size_t d0 = skel.degree(b.joints.front());
      const std::size_t d1 = skel.degree(b.joints.back());
      if (d0 == 1 && d1 >= 3) std::reverse(b.joints.begin(), b.joints.end());
      else if (!(d0 >= 3 && d1 == 1)) continue;
      // b now runs junction -> terminal.
      bool scoped = true;
      for (std::size_t i = 1; i < b.joints.size() && scoped; ++i) scoped = in_scope(skel, b.joints[i], scope);
      if (!scoped) continue;
      const double len = branch_length(skel, b);
      if (len < eps_t && len < victim_len) {
        victim = b;
        victim_len = len;
      }
    }
    if (!victim) break;
    for (std::size_t i = 1; i < victim->joints.size(); ++i) skel.remove_joint(victim->joints[i]);
    changed = true;
  }
  return changed;
}

bool collapse_in_place(Skeleton& skel, double eps_c, const RefineScope& scope) {
  if (!(eps_c > 0.0)) return false;
  bool changed = false;
  const std::size_t limit = skel.bone_count() + 1;
  for (std::size_t round = 0; round < limit; ++round) {
    std::optional<Bone> victim;
    for (const Bone& b : skel.bones()) {
      if (skel.degree(b.from) < 2 || skel.degree(b.to) < 2) continue;
      if (!in_scope(skel, b.from, scope) || !in_scope(skel, b.to, scope)) continue;
      if (b.length < eps_c && (!victim || b.length < victim->length)) victim = b;
    }
    if (!victim) break;
    skel.contract(victim->from, victim->to,
                  midpoint(skel.joint(victim->from).position, skel.joint(victim->to).position));
    changed = true;
  }
  return changed;
}

}  // namespace

Skeleton simplify_branch(Skeleton skel, const Branch& branch, const PartPolygons& polys, double eps_s,
                         const BoundedDPConfig& bdp) {
  simplify_in_place(skel, branch, polys, eps_s, bdp, std::nullopt);
  return skel;
}

Skeleton merge_joints(Skeleton skel, double eps_m, const RefineScope& scope) {
  merge_in_place(skel, eps_m, scope);
  return skel;
}

Skeleton prune_branches(Skeleton skel, double eps_t, const RefineScope& scope) {
  prune_in_place(skel, eps_t, scope);
  return skel;
}

Skeleton collapse_edges(Skeleton skel, double eps_c, const RefineScope& scope) {
  collapse_in_place(skel, eps_c, scope);
  return skel;
}

Skeleton refine(Skeleton skel, const RefineConfig& config, const PartPolygons& polys, const BoundedDPConfig& bdp) {
  if (config.eps_s < 0 || config.eps_m < 0 || config.eps_t < 0 || config.eps_c < 0) {
    throw Error(ErrorCode::InvalidArgument, "refine thresholds must be non-negative");
  }
  if (config.scope.kind == ScopeKind::Branch) {
    const auto bs = branches(skel);
    if (config.scope.branch < bs.size()) {
      simplify_in_place(skel, bs[config.scope.branch], polys, config.eps_s, bdp, std::nullopt);
    }
    return skel;
  }
  SettledRuns settled;
  for (int round = 0; round < kMaxRounds; ++round) {
    bool changed = simplify_scope(skel, polys, config.eps_s, bdp, config.scope, settled);
    changed |= merge_in_place(skel, config.eps_m, config.scope);
    changed |= prune_in_place(skel, config.eps_t, config.scope);
    changed |= collapse_in_place(skel, config.eps_c, config.scope);
    if (!changed) break;
  }
  return skel;
}

}  // namespace skelforge
