#include "skelforge/connect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skelforge/error.hpp"

namespace skelforge {

BoneJointDistance bone_joint_distance(Point vi, Point vj, Point vk) {
  const Vec2 ij = vj - vi;
  const Vec2 ik = vk - vi;
  const Vec2 ji = vi - vj;
  const Vec2 jk = vk - vj;
  if (dot(ij, ik) >= 0.0 && dot(ji, jk) >= 0.0) {
    const double len = norm(ij);
    // |ik| sin(theta) with theta the angle at v_i.
    return {len > 0.0 ? std::abs(cross(ij, ik)) / len : norm(ik), DistanceCase::Perpendicular};
  }
  return {std::min(norm(ik), norm(jk)), DistanceCase::Endpoint};
}

namespace {

// Boundary distances along +dir and -dir; missing sides are nullopt.
std::pair<std::optional<double>, std::optional<double>> cross_section(Point p, Vec2 dir,
                                                                      const SimplePolygon& poly) {
  std::optional<double> up, down;
  for (std::size_t e = 0; e < poly.size(); ++e) {
    const Segment s = poly.edge(e);
    if (auto t = ray_segment_hit(Ray{p, dir}, s); t && (!up || *t < *up)) up = t;
    if (auto t = ray_segment_hit(Ray{p, -dir}, s); t && (!down || *t < *down)) down = t;
  }
  return {up, down};
}

}  // namespace

Skeleton compute_joint_radii(Skeleton skel, const SimplePolygon& poly) {
  std::vector<std::pair<JointId, double>> radii;
  const auto ring = poly.vertices();
  for (const auto& [id, j] : skel.joints()) {
    if (!point_in_polygon(j.position, ring) && distance_to_ring(j.position, ring) > kEpsGeom) {
      throw Error(ErrorCode::SliceMiss, "joint lies outside its polygon");
    }
    double acc = 0.0;
    int hits = 0;
    const auto& ns = skel.neighbors(id);
    if (ns.empty()) {
      for (int k = 0; k < 36; ++k) {
        const double a = 2.0 * std::numbers::pi * k / 36.0;
        const Vec2 dir{std::cos(a), std::sin(a)};
        double best = -1.0;
        for (std::size_t e = 0; e < poly.size(); ++e) {
          if (auto t = ray_segment_hit(Ray{j.position, dir}, poly.edge(e)); t && (best < 0.0 || *t < best)) best = *t;
        }
        if (best >= 0.0) {
          acc += best;
          ++hits;
        }
      }
      if (hits == 0) throw Error(ErrorCode::SliceMiss, "joint sees no polygon boundary");
      radii.emplace_back(id, acc / hits);
      continue;
    }
    double sum_slices = 0.0;
    int slices = 0;
    for (JointId n : ns) {
      const Vec2 along = skel.joint(n).position - j.position;
      if (norm(along) <= kEpsGeom) continue;
      const auto [up, down] = cross_section(j.position, perp_left(normalized(along)), poly);
      if (up && down) {
        sum_slices += 0.5 * (*up + *down);
      } else if (up || down) {
        sum_slices += up ? *up : *down;
      } else {
        continue;
      }
      ++slices;
    }
    if (slices == 0) throw Error(ErrorCode::SliceMiss, "joint sees no polygon boundary");
    radii.emplace_back(id, sum_slices / slices);
  }
  for (const auto& [id, r] : radii) skel.joint(id).radius = r;
  return skel;
}

bool Capsule::contains(Point p) const {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  const double r = ra + t * (rb - ra);
  return distance(p, a + d * t) <= r + kEpsGeom;
}

bool CapsuleApprox::contains(Point p) const {
  return std::any_of(discs.begin(), discs.end(), [p](const Capsule& c) { return c.contains(p); }) ||
         std::any_of(capsules.begin(), capsules.end(), [p](const Capsule& c) { return c.contains(p); });
}

CapsuleApprox capsule_approx(const Skeleton& skel) {
  CapsuleApprox out;
  for (const auto& [id, j] : skel.joints()) out.discs.push_back({j.position, j.position, j.radius, j.radius});
  for (const Bone& b : skel.bones()) {
    const Joint& ja = skel.joint(b.from);
    const Joint& jb = skel.joint(b.to);
    out.capsules.push_back({ja.position, jb.position, ja.radius, jb.radius});
  }
  return out;
}

std::vector<JointId> attach_candidates(const Skeleton& skel) {
  std::vector<JointId> out;
  for (const auto& [id, j] : skel.joints()) {
    if (skel.degree(id) != 2) out.push_back(id);
  }
  return out;
}

std::optional<JointId> parts_intersect(const CapsuleApprox& parent, const Skeleton& child) {
  for (JointId id : attach_candidates(child)) {
    if (parent.contains(child.joint(id).position)) return id;
  }
  return std::nullopt;
}

std::optional<AttachChoice> choose_attach(const Skeleton& parent, const Skeleton& child) {
  const auto candidates = attach_candidates(child);
  if (parent.empty() || candidates.empty()) return std::nullopt;
  const auto bones = parent.bones();
  std::optional<AttachChoice> best;

  if (bones.empty()) {
    const Joint& pj = parent.joints().begin()->second;
    for (JointId c : candidates) {
      const double d = distance(child.joint(c).position, pj.position);
      if (!best || d < best->distance) {
        best = AttachChoice{AttachType::JointConnect, c, 0, 0, pj.id, pj.position, d};
      }
    }
    return best;
  }

  for (JointId c : candidates) {
    const Point vk = child.joint(c).position;
    for (const Bone& b : bones) {
      const Point vi = parent.joint(b.from).position;
      const Point vj = parent.joint(b.to).position;
      const BoneJointDistance bd = bone_joint_distance(vi, vj, vk);
      if (best && !(bd.distance < best->distance)) continue;
      AttachChoice ch;
      ch.child_joint = c;
      ch.distance = bd.distance;
      ch.bone_from = b.from;
      ch.bone_to = b.to;
      if (bd.kind == DistanceCase::Perpendicular) {
        const Point foot = closest_point_on_segment(vk, {vi, vj});
        if (distance(foot, vi) <= kEpsGeom || distance(foot, vj) <= kEpsGeom) {
          ch.type = AttachType::JointConnect;
          ch.parent_joint = distance(foot, vi) <= kEpsGeom ? b.from : b.to;
          ch.point = parent.joint(ch.parent_joint).position;
        } else {
          ch.type = AttachType::BoneSplit;
          ch.point = foot;
        }
      } else {
        ch.type = AttachType::JointConnect;
        ch.parent_joint = distance(vk, vi) <= distance(vk, vj) ? b.from : b.to;
        ch.point = parent.joint(ch.parent_joint).position;
      }
      best = ch;
    }
  }
  return best;
}

JointId apply_attach(Skeleton& skel, const AttachChoice& choice, PartId part) {
  if (choice.type == AttachType::JointConnect) {
    skel.connect(choice.parent_joint, choice.child_joint);
    return choice.parent_joint;
  }
  if (!skel.adjacent(choice.bone_from, choice.bone_to)) {
    throw Error(ErrorCode::InvalidArgument, "attach bone does not exist");
  }
  const JointId split = skel.add_joint(choice.point, 0.0, part);
  const double ra = skel.joint(choice.bone_from).radius;
  const double rb = skel.joint(choice.bone_to).radius;
  const double len = distance(skel.joint(choice.bone_from).position, skel.joint(choice.bone_to).position);
  const double t = len > 0.0 ? distance(skel.joint(choice.bone_from).position, choice.point) / len : 0.0;
  skel.joint(split).radius = ra + t * (rb - ra);
  skel.disconnect(choice.bone_from, choice.bone_to);
  skel.connect(choice.bone_from, split);
  skel.connect(split, choice.bone_to);
  skel.connect(split, choice.child_joint);
  return split;
}

AttachOutcome attach(const Skeleton& parent, const Skeleton& child) {
  AttachOutcome out{parent, {}, {}};
  for (const auto& [id, j] : child.joints()) {
    out.child_ids[id] = out.combined.add_joint(j.position, j.radius, j.part);
  }
  for (const Bone& b : child.bones()) out.combined.connect(out.child_ids.at(b.from), out.child_ids.at(b.to));
  const auto choice = choose_attach(parent, child);
  if (!choice) throw Error(ErrorCode::EmptySkeleton, "nothing to attach");
  out.choice = *choice;
  out.choice.child_joint = out.child_ids.at(choice->child_joint);
  const PartId part = parent.empty() ? kNoPart : parent.joints().begin()->second.part;
  const JointId parent_side = apply_attach(out.combined, out.choice, part);
  if (out.choice.type == AttachType::BoneSplit) out.choice.parent_joint = parent_side;
  return out;
}

}  // namespace skelforge
