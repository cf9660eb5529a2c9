#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "skelforge/geom.hpp"
#include "skelforge/sskel.hpp"

namespace skelforge {

using JointId = std::uint64_t;
using PartId = std::int64_t;

inline constexpr PartId kNoPart = -1;

struct Joint {
  JointId id = 0;
  Point position;
  double radius = 0.0;
  PartId part = kNoPart;  // owning subpart; kNoPart outside a scene
};

// Undirected; `from < to` in everything Skeleton hands out.
struct Bone {
  JointId from = 0;
  JointId to = 0;
  double length = 0.0;
};

enum class JointKind { Isolated, Terminal, Sleeve, Junction };

struct Branch {
  std::vector<JointId> joints;  // end to end; interior joints are sleeves
};

// Joint/bone graph. Joints are addressed by stable ids that are never reused.
// Mutators keep the adjacency symmetric but do not enforce acyclicity; callers
// that need a forest check is_forest().
class Skeleton {
 public:
  JointId add_joint(Point p, double radius = 0.0, PartId part = kNoPart);
  // Inserts with an explicit id (deserialization); throws if the id is taken.
  void insert_joint(const Joint& j);
  void remove_joint(JointId id);

  void connect(JointId a, JointId b);
  void disconnect(JointId a, JointId b);
  bool adjacent(JointId a, JointId b) const;

  // Merges `b` into `a` (a keeps its id) and moves a to `at`. The bone a-b, if
  // any, disappears; b's other bones are re-attached to a.
  void contract(JointId a, JointId b, Point at);

  bool has_joint(JointId id) const { return joints_.count(id) != 0; }
  const Joint& joint(JointId id) const;
  Joint& joint(JointId id);
  const std::map<JointId, Joint>& joints() const { return joints_; }
  const std::set<JointId>& neighbors(JointId id) const;

  std::size_t joint_count() const { return joints_.size(); }
  std::size_t bone_count() const;
  std::vector<Bone> bones() const;
  double mean_bone_length() const;

  std::size_t degree(JointId id) const { return neighbors(id).size(); }
  JointKind kind(JointId id) const;

  bool is_forest() const;
  // Connected components, each sorted by id; components ordered by smallest id.
  std::vector<std::vector<JointId>> components() const;

  JointId next_id() const { return next_id_; }
  void reserve_ids(JointId next) { next_id_ = std::max(next_id_, next); }

  bool empty() const { return joints_.empty(); }

 private:
  std::map<JointId, Joint> joints_;
  std::map<JointId, std::set<JointId>> adj_;
  JointId next_id_ = 0;
};

// Interior straight-skeleton graph (peripheral and border edges dropped).
Skeleton from_straight_skeleton(const StraightSkeleton& ss);

// Repeatedly merges the shortest bone while it is shorter than
// factor * mean bone length (mean recomputed after each merge). Merged joints
// go to the bone midpoint; with a region, a midpoint outside it is replaced by
// the endpoint deeper inside.
Skeleton collapse_short_edges(Skeleton skel, double factor = 0.5, const SimplePolygon* region = nullptr);

// Same graph with ids renumbered 0..n-1 in current id order.
Skeleton renumbered(const Skeleton& skel);

std::vector<Branch> branches(const Skeleton& skel);
double branch_length(const Skeleton& skel, const Branch& b);

// Id- and position-free description of the forest shape; equal strings mean
// isomorphic forests.
std::string canonical_topology(const Skeleton& skel);

}  // namespace skelforge
