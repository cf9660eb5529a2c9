#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "skelforge/batch.hpp"
#include "skelforge/connect.hpp"
#include "skelforge/error.hpp"
#include "skelforge/json_io.hpp"
#include "skelforge/scene.hpp"
#include "skelforge/service.hpp"
#include "skelforge/sskel.hpp"

namespace py = pybind11;
using namespace skelforge;

namespace {

using XY = std::pair<double, double>;

std::vector<Point> to_points(const std::vector<XY>& xy) {
  std::vector<Point> out;
  out.reserve(xy.size());
  for (const auto& [x, y] : xy) out.push_back(Point::checked(x, y));
  return out;
}

std::vector<XY> from_points(std::span<const Point> pts) {
  std::vector<XY> out;
  out.reserve(pts.size());
  for (Point p : pts) out.emplace_back(p.x, p.y);
  return out;
}

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

SceneConfig config_from(const py::object& o) {
  SceneConfig c;
  if (!o.is_none()) apply_config_json(c, from_py(o));
  return c;
}

const char* kind_name(SSVertexKind k) { return k == SSVertexKind::Border ? "BORDER" : "SKELETON"; }

const char* kind_name(SSEdgeKind k) {
  switch (k) {
    case SSEdgeKind::Border: return "BORDER";
    case SSEdgeKind::Peripheral: return "PERIPHERAL";
    case SSEdgeKind::Skeleton: return "SKELETON";
  }
  return "";
}

py::dict straight_skeleton_dict(const std::vector<XY>& polygon) {
  const StraightSkeleton ss = extract_straight_skeleton(SimplePolygon::from_any_orientation(to_points(polygon)));
  py::list vertices, edges;
  for (const SSVertex& v : ss.vertices) {
    py::dict d;
    d["x"] = v.position.x;
    d["y"] = v.position.y;
    d["time"] = v.time;
    d["kind"] = kind_name(v.kind);
    d["defining_edges"] = v.defining_edges;
    vertices.append(d);
  }
  for (const SSEdge& e : ss.edges) {
    py::dict d;
    d["from"] = e.from;
    d["to"] = e.to;
    d["kind"] = kind_name(e.kind);
    edges.append(d);
  }
  py::dict out;
  out["vertices"] = vertices;
  out["edges"] = edges;
  out["split_events"] = ss.count(WavefrontEventKind::Split);
  return out;
}

// Per-part pipeline plus refinement on one polygon, as the batch tool does.
py::object skeletonize(const std::vector<XY>& polygon, const py::object& config) {
  const SceneConfig cfg = config_from(config);
  PartBuild built = build_part(SimplePolygon::from_any_orientation(to_points(polygon)), cfg);
  for (const auto& [id, j] : built.skeleton.joints()) built.skeleton.joint(id).part = 0;
  return to_py(skeleton_to_json(refine(std::move(built.skeleton), cfg.refine, {{0, built.polygon}}, cfg.bdp)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Skeletonization engine bindings";

  // Kept alive by the module for the interpreter's lifetime.
  static PyObject* error_type = PyErr_NewException("skelforge._core.SkelforgeError", PyExc_ValueError, nullptr);
  m.attr("SkelforgeError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.attr("SCENE_VERSION") = std::string(kSceneVersion);
  m.attr("PROTO_VERSION") = std::string(kProtoVersion);

  m.def(
      "discretize",
      [](const std::vector<XY>& points, double step) {
        return from_points(uniform_discretize({to_points(points), true}, step));
      },
      py::arg("points"), py::arg("step") = 10.0, "Evenly resample a closed stroke.");

  m.def(
      "acquire_polygon",
      [](const std::vector<XY>& points, double step, double eps_poly) {
        return from_points(acquire_polygon({to_points(points), true}, {step, eps_poly}).vertices());
      },
      py::arg("points"), py::arg("step") = 10.0, py::arg("eps_poly") = 3.0,
      "Stroke to simple counter-clockwise polygon.");

  m.def("straight_skeleton", &straight_skeleton_dict, py::arg("polygon"));

  m.def("skeletonize", &skeletonize, py::arg("polygon"), py::arg("config") = py::none(),
        "Refined skeleton of one polygon as a dict.");

  m.def(
      "bone_joint_distance",
      [](XY vi, XY vj, XY vk) {
        const auto d = bone_joint_distance({vi.first, vi.second}, {vj.first, vj.second}, {vk.first, vk.second});
        return py::make_tuple(d.distance, d.kind == DistanceCase::Perpendicular ? "PERPENDICULAR" : "ENDPOINT");
      },
      py::arg("vi"), py::arg("vj"), py::arg("vk"));

  py::class_<Scene>(m, "Scene")
      .def(py::init([](const py::object& config) { return Scene(config_from(config)); }),
           py::arg("config") = py::none())
      .def(
          "add_part",
          [](Scene& s, const std::vector<XY>& points, bool closed) {
            return s.add_part({to_points(points), closed});
          },
          py::arg("points"), py::arg("closed") = true)
      .def(
          "move_part",
          [](Scene& s, PartId id, double tx, double ty, double rot, double scale) {
            s.move_part(id, {tx, ty, rot, scale});
          },
          py::arg("part"), py::arg("tx") = 0.0, py::arg("ty") = 0.0, py::arg("rot") = 0.0, py::arg("scale") = 1.0)
      .def("set_config",
           [](Scene& s, const py::object& config) {
             SceneConfig c = s.config();
             apply_config_json(c, from_py(config));
             s.set_config(c);
           })
      .def_property_readonly("config", [](const Scene& s) { return to_py(config_to_json(s.config())); })
      .def_property_readonly("part_ids",
                             [](const Scene& s) {
                               std::vector<PartId> ids;
                               for (const Subpart& p : s.parts()) ids.push_back(p.id);
                               return ids;
                             })
      .def_property_readonly("roots", &Scene::roots)
      .def_property_readonly("hierarchy",
                             [](const Scene& s) {
                               Json out = Json::array();
                               for (const HierarchyEdge& e : s.hierarchy()) out.push_back(edge_to_json(e));
                               return to_py(out);
                             })
      .def("part_polygon", [](const Scene& s, PartId id) { return from_points(s.part(id).world_polygon().vertices()); })
      .def("part_skeleton", [](const Scene& s, PartId id) { return to_py(skeleton_to_json(s.part(id).world_skeleton())); })
      .def("global_skeleton", [](const Scene& s) { return to_py(skeleton_to_json(s.global_skeleton())); })
      .def("save", &Scene::save)
      .def_static("load", [](const std::string& doc) { return Scene::load(doc); }, py::arg("document"));

  py::class_<Session>(m, "Session")
      .def(py::init([](const std::string& data_dir) { return std::make_unique<Session>(data_dir); }),
           py::arg("data_dir"))
      .def("handle_line", &Session::handle_line, py::arg("line"), "One NDJSON request line in, one reply line out.");
}
