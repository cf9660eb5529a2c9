#include "skelforge/scene.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

#include "skelforge/error.hpp"
#include "skelforge/json_io.hpp"
#include "skelforge/sskel.hpp"

namespace skelforge {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

Skeleton Subpart::world_skeleton() const {
  Skeleton out;
  for (const auto& [jid, j] : skeleton.joints()) {
    out.insert_joint({jid, transform.apply(j.position), j.radius * transform.scale, id});
  }
  for (const Bone& b : skeleton.bones()) out.connect(b.from, b.to);
  out.reserve_ids(skeleton.next_id());
  return out;
}

PartBuild build_part(const RawStroke& stroke, const SceneConfig& config, StageTimings* timings) {
  StageTimings local;
  StageTimings& t = timings ? *timings : local;
  const auto start = Clock::now();

  auto t0 = Clock::now();
  SimplePolygon poly = acquire_polygon(stroke, config.stroke);
  t.polygon = ms_since(t0);
  PartBuild out = build_part(std::move(poly), config, &t);
  t.total = ms_since(start);
  return out;
}

PartBuild build_part(SimplePolygon poly, const SceneConfig& config, StageTimings* timings) {
  StageTimings local;
  StageTimings& t = timings ? *timings : local;
  const auto start = Clock::now();

  auto t0 = Clock::now();
  StraightSkeleton ss = extract_straight_skeleton(poly);
  t.sskel = ms_since(t0);

  t0 = Clock::now();
  Skeleton skel = collapse_short_edges(from_straight_skeleton(ss), config.collapse_factor, &poly);
  t.clean = ms_since(t0);

  t0 = Clock::now();
  skel = simplify_branches(std::move(skel), poly, config.bdp);
  t.boundeddp = ms_since(t0);

  t0 = Clock::now();
  skel = compute_joint_radii(renumbered(skel), poly);
  t.connect = ms_since(t0);

  t.total = ms_since(start);
  return {std::move(poly), std::move(ss), std::move(skel)};
}

const Subpart& Scene::part(PartId id) const {
  for (const Subpart& p : parts_) {
    if (p.id == id) return p;
  }
  throw Error(ErrorCode::UnknownPart, "no part with id " + std::to_string(id));
}

bool Scene::has_part(PartId id) const {
  return std::any_of(parts_.begin(), parts_.end(), [id](const Subpart& p) { return p.id == id; });
}

std::optional<HierarchyEdge> Scene::parent_edge(PartId child) const {
  for (const HierarchyEdge& e : hierarchy_) {
    if (e.child == child) return e;
  }
  return std::nullopt;
}

std::vector<PartId> Scene::roots() const {
  std::vector<PartId> out;
  for (const Subpart& p : parts_) {
    if (!parent_edge(p.id)) out.push_back(p.id);
  }
  return out;
}

std::optional<HierarchyEdge> Scene::connect_part(const Subpart& child) const {
  const Skeleton cw = child.world_skeleton();
  std::optional<HierarchyEdge> best;
  double best_distance = 0.0;
  for (const Subpart& p : parts_) {
    if (p.seq >= child.seq) continue;
    const Skeleton pw = p.world_skeleton();
    if (!parts_intersect(capsule_approx(pw), cw)) continue;
    const auto choice = choose_attach(pw, cw);
    if (!choice || (best && !(choice->distance < best_distance))) continue;
    HierarchyEdge e;
    e.parent = p.id;
    e.child = child.id;
    e.type = choice->type;
    e.child_joint = choice->child_joint;
    if (choice->type == AttachType::BoneSplit) {
      e.bone_from = choice->bone_from;
      e.bone_to = choice->bone_to;
      e.point = p.transform.inverse_apply(choice->point);
    } else {
      e.parent_joint = choice->parent_joint;
    }
    best = e;
    best_distance = choice->distance;
  }
  return best;
}

void Scene::set_parent_edge(PartId child, std::optional<HierarchyEdge> edge) {
  std::erase_if(hierarchy_, [child](const HierarchyEdge& e) { return e.child == child; });
  if (edge) hierarchy_.push_back(*edge);
  std::sort(hierarchy_.begin(), hierarchy_.end(), [this](const HierarchyEdge& a, const HierarchyEdge& b) {
    return part(a.child).seq < part(b.child).seq;
  });
}

PartId Scene::add_part(const RawStroke& stroke, StageTimings* timings) {
  StageTimings local;
  StageTimings& t = timings ? *timings : local;
  const auto start = Clock::now();
  PartBuild built = build_part(stroke, config_, &t);

  const auto t0 = Clock::now();
  Subpart p;
  p.id = next_id_++;
  p.seq = next_seq_++;
  p.polygon = std::move(built.polygon);
  p.skeleton = std::move(built.skeleton);
  parts_.push_back(std::move(p));
  set_parent_edge(parts_.back().id, connect_part(parts_.back()));
  t.connect += ms_since(t0);
  invalidate();
  t.total = ms_since(start);
  return parts_.back().id;
}

void Scene::move_part(PartId id, const Transform2& transform) {
  if (!(transform.scale > 0.0) || !std::isfinite(transform.scale) || !std::isfinite(transform.tx) ||
      !std::isfinite(transform.ty) || !std::isfinite(transform.rot)) {
    throw Error(ErrorCode::InvalidArgument, "transform must be finite with positive scale");
  }
  auto it = std::find_if(parts_.begin(), parts_.end(), [id](const Subpart& p) { return p.id == id; });
  if (it == parts_.end()) throw Error(ErrorCode::UnknownPart, "no part with id " + std::to_string(id));
  it->transform = transform;
  set_parent_edge(id, connect_part(*it));
  invalidate();
}

void Scene::set_config(const SceneConfig& config) {
  if (!(config.stroke.step > 0.0) || config.stroke.eps_poly < 0.0 || config.bdp.alpha_s < 0.0 ||
      !(config.bdp.eps0_factor > 0.0) || !(config.bdp.alpha > 0.0 && config.bdp.alpha < 1.0) ||
      config.bdp.max_iterations < 1 || config.refine.eps_s < 0.0 || config.refine.eps_m < 0.0 ||
      config.refine.eps_t < 0.0 || config.refine.eps_c < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "configuration value out of range");
  }
  config_ = config;
  invalidate();
}

void Scene::set_scope(const RefineScope& scope) {
  if (scope.kind == ScopeKind::Subpart && !has_part(scope.part)) {
    throw Error(ErrorCode::UnknownPart, "no part with id " + std::to_string(scope.part));
  }
  config_.refine.scope = scope;
  invalidate();
}

Skeleton Scene::assemble_global_skeleton(double* refine_ms) const {
  Skeleton world;
  std::map<PartId, std::map<JointId, JointId>> ids;
  PartPolygons polys;
  for (const Subpart& p : parts_) {
    auto& m = ids[p.id];
    for (const auto& [jid, j] : p.skeleton.joints()) {
      m[jid] = world.add_joint(p.transform.apply(j.position), j.radius * p.transform.scale, p.id);
    }
    for (const Bone& b : p.skeleton.bones()) world.connect(m.at(b.from), m.at(b.to));
    polys.emplace(p.id, p.world_polygon());
  }

  // Split joints inserted along each original parent bone, in bone order.
  std::map<std::tuple<PartId, JointId, JointId>, std::vector<JointId>> chains;
  for (const HierarchyEdge& e : hierarchy_) {
    const Subpart& parent = part(e.parent);
    const auto& pm = ids.at(e.parent);
    const JointId child_joint = ids.at(e.child).at(e.child_joint);
    if (e.type == AttachType::JointConnect) {
      world.connect(pm.at(e.parent_joint), child_joint);
      continue;
    }
    auto key = std::make_tuple(e.parent, e.bone_from, e.bone_to);
    auto& chain = chains[key];
    if (chain.empty()) chain = {pm.at(e.bone_from), pm.at(e.bone_to)};
    const Point foot = parent.transform.apply(e.point);
    std::size_t k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const double d =
          point_to_segment_distance(foot, {world.joint(chain[i]).position, world.joint(chain[i + 1]).position});
      if (d < best) {
        best = d;
        k = i;
      }
    }
    const JointId x = chain[k];
    const JointId y = chain[k + 1];
    if (distance(foot, world.joint(x).position) <= kEpsGeom) {
      world.connect(x, child_joint);
    } else if (distance(foot, world.joint(y).position) <= kEpsGeom) {
      world.connect(y, child_joint);
    } else {
      AttachChoice ch;
      ch.type = AttachType::BoneSplit;
      ch.child_joint = child_joint;
      ch.bone_from = x;
      ch.bone_to = y;
      ch.point = foot;
      const JointId split = apply_attach(world, ch, e.parent);
      chain.insert(chain.begin() + static_cast<std::ptrdiff_t>(k) + 1, split);
    }
  }

  const auto t0 = Clock::now();
  world = refine(std::move(world), config_.refine, polys, config_.bdp);
  if (refine_ms) *refine_ms = ms_since(t0);
  return world;
}

const Skeleton& Scene::global_skeleton() const {
  if (!cache_) cache_ = assemble_global_skeleton();
  return *cache_;
}

std::string Scene::save() const { return scene_to_json(*this).dump(2) + "\n"; }

Scene Scene::load(std::string_view document) {
  Json j;
  try {
    j = Json::parse(document);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("invalid JSON: ") + e.what());
  }
  return scene_from_json(j);
}

}  // namespace skelforge
