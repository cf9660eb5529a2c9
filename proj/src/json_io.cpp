#include "skelforge/json_io.hpp"

#include <set>

#include "skelforge/error.hpp"

namespace skelforge {

Json point_to_json(Point p) { return Json::array({p.x, p.y}); }

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::MalformedDocument, "point must be [x, y]");
  }
  return Point::checked(j[0].get<double>(), j[1].get<double>());
}

Json skeleton_to_json(const Skeleton& skel) {
  Json joints = Json::array();
  for (const auto& [id, jt] : skel.joints()) {
    Json o = {{"id", id}, {"x", jt.position.x}, {"y", jt.position.y}, {"radius", jt.radius}};
    if (jt.part != kNoPart) o["part"] = jt.part;
    joints.push_back(std::move(o));
  }
  Json bones = Json::array();
  for (const Bone& b : skel.bones()) bones.push_back(Json::array({b.from, b.to}));
  return {{"joints", std::move(joints)}, {"bones", std::move(bones)}};
}

Skeleton skeleton_from_json(const Json& j) {
  try {
    Skeleton skel;
    for (const Json& o : j.at("joints")) {
      Joint jt;
      jt.id = o.at("id").get<JointId>();
      jt.position = Point::checked(o.at("x").get<double>(), o.at("y").get<double>());
      jt.radius = o.value("radius", 0.0);
      jt.part = o.value("part", kNoPart);
      skel.insert_joint(jt);
    }
    for (const Json& b : j.at("bones")) {
      if (!b.is_array() || b.size() != 2) throw Error(ErrorCode::MalformedDocument, "bone must be [a, b]");
      const JointId a = b[0].get<JointId>();
      const JointId c = b[1].get<JointId>();
      if (!skel.has_joint(a) || !skel.has_joint(c) || a == c) {
        throw Error(ErrorCode::MalformedDocument, "bone references an unknown joint");
      }
      skel.connect(a, c);
    }
    if (!skel.is_forest()) throw Error(ErrorCode::MalformedDocument, "skeleton contains a cycle");
    return skel;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("bad skeleton: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedDocument) throw;
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
}

Json transform_to_json(const Transform2& t) {
  return {{"tx", t.tx}, {"ty", t.ty}, {"rot", t.rot}, {"scale", t.scale}};
}

Transform2 transform_from_json(const Json& j) {
  try {
    Transform2 t{j.value("tx", 0.0), j.value("ty", 0.0), j.value("rot", 0.0), j.value("scale", 1.0)};
    if (!std::isfinite(t.tx) || !std::isfinite(t.ty) || !std::isfinite(t.rot) || !(t.scale > 0.0) ||
        !std::isfinite(t.scale)) {
      throw Error(ErrorCode::MalformedDocument, "transform must be finite with positive scale");
    }
    return t;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("bad transform: ") + e.what());
  }
}

Json config_to_json(const SceneConfig& c) {
  return {{"step", c.stroke.step},      {"eps_poly", c.stroke.eps_poly}, {"alpha_s", c.bdp.alpha_s},
          {"eps0_factor", c.bdp.eps0_factor}, {"alpha", c.bdp.alpha}, {"eps_s", c.refine.eps_s},
          {"eps_m", c.refine.eps_m},    {"eps_t", c.refine.eps_t},       {"eps_c", c.refine.eps_c}};
}

void apply_config_json(SceneConfig& c, const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be an object");
  static const std::set<std::string> known{"step",  "eps_poly", "alpha_s", "eps0_factor", "alpha",
                                           "eps_s", "eps_m",    "eps_t",   "eps_c"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    if (!value.is_number()) throw Error(ErrorCode::InvalidArgument, "config '" + key + "' must be a number");
  }
  auto take = [&j](const char* key, double& slot) {
    if (j.contains(key)) slot = j[key].get<double>();
  };
  take("step", c.stroke.step);
  take("eps_poly", c.stroke.eps_poly);
  take("alpha_s", c.bdp.alpha_s);
  take("eps0_factor", c.bdp.eps0_factor);
  take("alpha", c.bdp.alpha);
  take("eps_s", c.refine.eps_s);
  take("eps_m", c.refine.eps_m);
  take("eps_t", c.refine.eps_t);
  take("eps_c", c.refine.eps_c);
}

Json part_to_json(const Subpart& p) {
  Json poly = Json::array();
  for (const Point& v : p.polygon.vertices()) poly.push_back(point_to_json(v));
  return {{"id", p.id},
          {"seq", p.seq},
          {"transform", transform_to_json(p.transform)},
          {"polygon", std::move(poly)},
          {"skeleton", skeleton_to_json(p.skeleton)}};
}

Json edge_to_json(const HierarchyEdge& e) {
  Json attach;
  if (e.type == AttachType::BoneSplit) {
    attach = {{"type", "BONE_SPLIT"}, {"bone", Json::array({e.bone_from, e.bone_to})}, {"point", point_to_json(e.point)}};
  } else {
    attach = {{"type", "JOINT_CONNECT"}, {"joint", e.parent_joint}};
  }
  return {{"parent", e.parent}, {"child", e.child}, {"attach", std::move(attach)}, {"child_joint", e.child_joint}};
}

Json scene_to_json(const Scene& s) {
  Json parts = Json::array();
  for (const Subpart& p : s.parts()) parts.push_back(part_to_json(p));
  Json edges = Json::array();
  for (const HierarchyEdge& e : s.hierarchy()) edges.push_back(edge_to_json(e));
  return {{"version", kSceneVersion},
          {"config", config_to_json(s.config())},
          {"parts", std::move(parts)},
          {"hierarchy", std::move(edges)}};
}

class SceneCodec {
 public:
  static Scene decode(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedDocument, "scene document must be an object");
    if (!j.contains("version") || !j["version"].is_string()) {
      throw Error(ErrorCode::MalformedDocument, "scene document has no version");
    }
    if (j["version"].get<std::string>() != kSceneVersion) {
      throw Error(ErrorCode::SchemaVersionMismatch,
                  "unsupported scene version '" + j["version"].get<std::string>() + "'");
    }
    try {
      SceneConfig config;
      if (j.contains("config")) apply_config_json(config, j["config"]);
      Scene scene(config);
      std::int64_t last_seq = -1;
      for (const Json& pj : j.at("parts")) {
        Subpart p;
        p.id = pj.at("id").get<PartId>();
        p.seq = pj.at("seq").get<std::uint64_t>();
        if (p.id < 0 || scene.has_part(p.id)) throw Error(ErrorCode::MalformedDocument, "duplicate part id");
        if (static_cast<std::int64_t>(p.seq) <= last_seq) {
          throw Error(ErrorCode::MalformedDocument, "part seq must be strictly increasing");
        }
        last_seq = static_cast<std::int64_t>(p.seq);
        p.transform = transform_from_json(pj.value("transform", Json::object()));
        std::vector<Point> verts;
        for (const Json& v : pj.at("polygon")) verts.push_back(point_from_json(v));
        p.polygon = SimplePolygon::from_vertices(std::move(verts));
        p.skeleton = skeleton_from_json(pj.at("skeleton"));
        scene.next_id_ = std::max(scene.next_id_, p.id + 1);
        scene.next_seq_ = std::max(scene.next_seq_, p.seq + 1);
        scene.parts_.push_back(std::move(p));
      }
      std::set<PartId> children;
      for (const Json& ej : j.at("hierarchy")) {
        HierarchyEdge e;
        e.parent = ej.at("parent").get<PartId>();
        e.child = ej.at("child").get<PartId>();
        e.child_joint = ej.at("child_joint").get<JointId>();
        const Json& a = ej.at("attach");
        const std::string type = a.at("type").get<std::string>();
        const Subpart& parent = scene.part(e.parent);
        const Subpart& child = scene.part(e.child);
        if (parent.seq >= child.seq) throw Error(ErrorCode::MalformedDocument, "parent must precede child");
        if (!children.insert(e.child).second) throw Error(ErrorCode::MalformedDocument, "part has two parents");
        if (!child.skeleton.has_joint(e.child_joint)) {
          throw Error(ErrorCode::MalformedDocument, "child joint does not exist");
        }
        if (type == "BONE_SPLIT") {
          e.type = AttachType::BoneSplit;
          const Json& bone = a.at("bone");
          e.bone_from = bone.at(0).get<JointId>();
          e.bone_to = bone.at(1).get<JointId>();
          e.point = point_from_json(a.at("point"));
          if (!parent.skeleton.adjacent(e.bone_from, e.bone_to)) {
            throw Error(ErrorCode::MalformedDocument, "attach bone does not exist");
          }
        } else if (type == "JOINT_CONNECT") {
          e.type = AttachType::JointConnect;
          e.parent_joint = a.at("joint").get<JointId>();
          if (!parent.skeleton.has_joint(e.parent_joint)) {
            throw Error(ErrorCode::MalformedDocument, "attach joint does not exist");
          }
        } else {
          throw Error(ErrorCode::MalformedDocument, "unknown attach type '" + type + "'");
        }
        scene.hierarchy_.push_back(e);
      }
      std::sort(scene.hierarchy_.begin(), scene.hierarchy_.end(),
                [&scene](const HierarchyEdge& x, const HierarchyEdge& y) {
                  return scene.part(x.child).seq < scene.part(y.child).seq;
                });
      return scene;
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::MalformedDocument, std::string("bad scene document: ") + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MalformedDocument) throw;
      throw Error(ErrorCode::MalformedDocument, e.what());
    }
  }
};

Scene scene_from_json(const Json& j) { return SceneCodec::decode(j); }

}  // namespace skelforge
