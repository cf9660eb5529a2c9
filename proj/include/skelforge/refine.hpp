#pragma once

#include <map>

#include "skelforge/boundeddp.hpp"
#include "skelforge/skeleton.hpp"
#include "skelforge/stroke.hpp"

namespace skelforge {

enum class ScopeKind { Branch, Subpart, Global };

struct RefineScope {
  ScopeKind kind = ScopeKind::Global;
  std::size_t branch = 0;  // index into branches() of the skeleton being refined
  PartId part = kNoPart;

  static RefineScope global() { return {}; }
  static RefineScope subpart(PartId p) { return {ScopeKind::Subpart, 0, p}; }
  static RefineScope single_branch(std::size_t i) { return {ScopeKind::Branch, i, kNoPart}; }
  friend bool operator==(const RefineScope&, const RefineScope&) = default;
};

struct RefineConfig {
  double eps_s = 5.0;
  double eps_m = 30.0;
  double eps_t = 30.0;
  double eps_c = 10.0;
  RefineScope scope;
};

// Region each joint's branch is simplified against, keyed by Joint::part.
using PartPolygons = std::map<PartId, SimplePolygon>;

// Re-simplifies `branch` with eps_s as the initial threshold. Branches that
// span several parts are handled per same-part run.
Skeleton simplify_branch(Skeleton skel, const Branch& branch, const PartPolygons& polys, double eps_s,
                         const BoundedDPConfig& bdp = {});

Skeleton merge_joints(Skeleton skel, double eps_m, const RefineScope& scope = {});
Skeleton prune_branches(Skeleton skel, double eps_t, const RefineScope& scope = {});
Skeleton collapse_edges(Skeleton skel, double eps_c, const RefineScope& scope = {});

// simplify, merge, prune, collapse, repeated until a full round changes
// nothing (bounded). A BRANCH scope only simplifies that branch.
Skeleton refine(Skeleton skel, const RefineConfig& config, const PartPolygons& polys,
                const BoundedDPConfig& bdp = {});

}  // namespace skelforge
