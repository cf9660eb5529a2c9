#pragma once

#include <map>
#include <optional>
#include <vector>

#include "skelforge/geom.hpp"
#include "skelforge/skeleton.hpp"
#include "skelforge/stroke.hpp"

namespace skelforge {

enum class DistanceCase { Perpendicular, Endpoint };

struct BoneJointDistance {
  double distance = 0.0;
  DistanceCase kind = DistanceCase::Endpoint;
};

// Distance from v_k to bone v_i v_j: perpendicular inside the bone's slab
// (both end dot products >= 0), nearest end joint outside it.
BoneJointDistance bone_joint_distance(Point vi, Point vj, Point vk);

// Fills every joint radius by slicing `poly` perpendicular to the incident
// bones (mean over bones); lone joints cast 36 rays. Throws SliceMiss when a
// joint sees no boundary at all.
Skeleton compute_joint_radii(Skeleton skel, const SimplePolygon& poly);

struct Capsule {
  Point a;
  Point b;
  double ra = 0.0;
  double rb = 0.0;

  bool contains(Point p) const;  // boundary counts as inside
};

struct CapsuleApprox {
  std::vector<Capsule> discs;     // one per joint, a == b
  std::vector<Capsule> capsules;  // one per bone

  bool contains(Point p) const;
};

CapsuleApprox capsule_approx(const Skeleton& skel);

// Terminal, junction and lone joints: the ones allowed to attach.
std::vector<JointId> attach_candidates(const Skeleton& skel);

// First attach candidate of `child` (by id) lying inside `parent`.
std::optional<JointId> parts_intersect(const CapsuleApprox& parent, const Skeleton& child);

enum class AttachType { BoneSplit, JointConnect };

struct AttachChoice {
  AttachType type = AttachType::JointConnect;
  JointId child_joint = 0;
  JointId bone_from = 0;     // BoneSplit: the split bone (from < to)
  JointId bone_to = 0;
  JointId parent_joint = 0;  // JointConnect target
  Point point;               // split foot, or the parent joint position
  double distance = 0.0;
};

// Minimum-distance (child candidate, parent bone) pair; ties keep the first
// pair in (child id, bone) order. Parents without bones connect to their
// joint. Returns nullopt if either side has no joints.
std::optional<AttachChoice> choose_attach(const Skeleton& parent, const Skeleton& child);

// Applies a choice to a skeleton holding both parent and child joints. Returns
// the parent-side joint of the new bone. The split joint takes `part`.
JointId apply_attach(Skeleton& skel, const AttachChoice& choice, PartId part = kNoPart);

struct AttachOutcome {
  Skeleton combined;
  AttachChoice choice;               // ids refer to `combined`
  std::map<JointId, JointId> child_ids;  // child id -> id in combined
};

// Copies `child` into `parent` and connects them.
AttachOutcome attach(const Skeleton& parent, const Skeleton& child);

}  // namespace skelforge
