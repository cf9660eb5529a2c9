#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skelforge/boundeddp.hpp"
#include "skelforge/connect.hpp"
#include "skelforge/refine.hpp"
#include "skelforge/skeleton.hpp"
#include "skelforge/stroke.hpp"

namespace skelforge {

inline constexpr std::string_view kSceneVersion = "skelforge/1";

struct SceneConfig {
  StrokeConfig stroke;
  BoundedDPConfig bdp;
  RefineConfig refine;  // scope is session state and is not persisted
  double collapse_factor = 0.5;

  friend bool operator==(const SceneConfig& a, const SceneConfig& b) {
    return a.stroke.step == b.stroke.step && a.stroke.eps_poly == b.stroke.eps_poly &&
           a.bdp.alpha_s == b.bdp.alpha_s && a.bdp.eps0_factor == b.bdp.eps0_factor && a.bdp.alpha == b.bdp.alpha &&
           a.bdp.max_iterations == b.bdp.max_iterations && a.refine.eps_s == b.refine.eps_s &&
           a.refine.eps_m == b.refine.eps_m && a.refine.eps_t == b.refine.eps_t &&
           a.refine.eps_c == b.refine.eps_c && a.refine.scope == b.refine.scope &&
           a.collapse_factor == b.collapse_factor;
  }
};

// Wall-clock milliseconds per pipeline stage.
struct StageTimings {
  double polygon = 0.0;
  double sskel = 0.0;
  double clean = 0.0;
  double boundeddp = 0.0;
  double connect = 0.0;  // joint radii + hierarchy
  double refine = 0.0;
  double total = 0.0;
};

struct HierarchyEdge {
  PartId parent = kNoPart;
  PartId child = kNoPart;
  AttachType type = AttachType::JointConnect;
  JointId bone_from = 0;     // BoneSplit: parent-local bone
  JointId bone_to = 0;
  Point point;               // BoneSplit: foot in the parent's local frame
  JointId parent_joint = 0;  // JointConnect: parent-local joint
  JointId child_joint = 0;   // child-local joint

  friend bool operator==(const HierarchyEdge&, const HierarchyEdge&) = default;
};

struct Subpart {
  PartId id = kNoPart;
  std::uint64_t seq = 0;
  SimplePolygon polygon;  // local frame
  Transform2 transform;
  Skeleton skeleton;      // local frame, radii filled

  SimplePolygon world_polygon() const { return polygon.transformed(transform); }
  // Positions and radii mapped to the canvas; joint ids unchanged, part = id.
  Skeleton world_skeleton() const;
};

struct PartBuild {
  SimplePolygon polygon;
  StraightSkeleton straight;
  Skeleton skeleton;
};

// Stroke -> polygon -> straight skeleton -> cleaned, simplified skeleton with
// radii. Fills the per-part stages of `timings`.
PartBuild build_part(const RawStroke& stroke, const SceneConfig& config, StageTimings* timings = nullptr);
// Same pipeline from an already simple polygon; leaves timings->polygon alone.
PartBuild build_part(SimplePolygon polygon, const SceneConfig& config, StageTimings* timings = nullptr);

class Scene {
 public:
  explicit Scene(SceneConfig config = {}) : config_(config) {}

  PartId add_part(const RawStroke& stroke, StageTimings* timings = nullptr);
  // Throws UnknownPart.
  void move_part(PartId id, const Transform2& transform);

  const std::vector<Subpart>& parts() const { return parts_; }
  const Subpart& part(PartId id) const;
  bool has_part(PartId id) const;

  // Edges ordered by the child's seq.
  const std::vector<HierarchyEdge>& hierarchy() const { return hierarchy_; }
  std::optional<HierarchyEdge> parent_edge(PartId child) const;
  std::vector<PartId> roots() const;

  const SceneConfig& config() const { return config_; }
  void set_config(const SceneConfig& config);
  void set_scope(const RefineScope& scope);

  // World-frame forest: part skeletons, hierarchy attaches, then refine.
  Skeleton assemble_global_skeleton(double* refine_ms = nullptr) const;
  const Skeleton& global_skeleton() const;

  std::string save() const;
  // Throws SchemaVersionMismatch or MalformedDocument.
  static Scene load(std::string_view document);

  // Persisted fields only (config, parts, hierarchy).
  friend bool operator==(const Scene& a, const Scene& b) { return a.save() == b.save(); }

 private:
  friend class SceneCodec;

  std::optional<HierarchyEdge> connect_part(const Subpart& child) const;
  void set_parent_edge(PartId child, std::optional<HierarchyEdge> edge);
  void invalidate() { cache_.reset(); }

  SceneConfig config_;
  std::vector<Subpart> parts_;
  std::vector<HierarchyEdge> hierarchy_;
  PartId next_id_ = 0;
  std::uint64_t next_seq_ = 0;
  mutable std::optional<Skeleton> cache_;
};

}  // namespace skelforge
