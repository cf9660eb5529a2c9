#include <fstream>

#include "skelforge/fixtures.hpp"
#include "skelforge/json_io.hpp"
#include "skelforge/scene.hpp"

namespace skelforge::fixtures {

namespace {

Json ring_json(std::span<const Point> ring) {
  Json out = Json::array();
  for (const Point& p : ring) out.push_back(point_to_json(p));
  return out;
}

void write_json(const std::filesystem::path& p, const Json& j) {
  std::ofstream f(p, std::ios::binary);
  f << j.dump(2) << '\n';
}

Json value(const char* quantity, Json v, const char* provenance) {
  return {{"quantity", quantity}, {"value", std::move(v)}, {"provenance", provenance}};
}

}  // namespace

std::size_t write_corpus(const std::filesystem::path& root, std::uint64_t seed) {
  const auto polys = root / "polygons";
  const auto scenes = root / "scenes";
  const auto expected = root / "expected";
  for (const auto& d : {polys, scenes, expected}) std::filesystem::create_directories(d);
  std::size_t written = 0;
  auto emit = [&written](const std::filesystem::path& p, const Json& j) {
    write_json(p, j);
    ++written;
  };

  const std::vector<Point> rect{{0, 0}, {8, 0}, {8, 4}, {0, 4}};
  const std::vector<Point> square{{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  const std::vector<Point> ell{{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}};
  emit(polys / "rectangle.json", ring_json(rect));
  emit(polys / "square.json", ring_json(square));
  emit(polys / "l_shape.json", ring_json(ell));
  emit(expected / "rectangle.json",
       {{"name", "rectangle"},
        {"values", Json::array({value("skeleton_vertices", Json::array({{2, 2}, {6, 2}}), "analytic"),
                                value("offset_time", 2, "analytic"), value("skeleton_edges", 1, "analytic")})}});
  emit(expected / "square.json",
       {{"name", "square"},
        {"values", Json::array({value("skeleton_vertices", Json::array({{2, 2}}), "analytic"),
                                value("degree", 4, "analytic")})}});
  emit(expected / "l_shape.json",
       {{"name", "l_shape"}, {"values", Json::array({value("split_events", 1, "oracle:wavefront")})}});
  emit(expected / "stroke_anchor.json",
       {{"name", "stroke_anchor"},
        {"values", Json::array({value("perimeter", 1972.28, "published"), value("step", 10, "published"),
                                value("points", 197, "published")})}});

  for (std::uint64_t k = 0; k < 8; ++k) {
    const std::uint64_t s = seed * 1000 + k;
    const std::size_t n = 3 + (k * 13) % 14;
    const SimplePolygon poly = gen_star_polygon(s, n);
    const std::string name = "star_" + std::to_string(s) + "_" + std::to_string(n);
    emit(polys / (name + ".json"), ring_json(poly.vertices()));
    const OracleSkeleton o = wavefront_oracle(poly, poly.diameter() / 2e4);
    Json nodes = Json::array();
    for (std::size_t i = poly.size(); i < o.nodes.size(); ++i) {
      nodes.push_back({{"x", o.nodes[i].position.x}, {"y", o.nodes[i].position.y}, {"time", o.nodes[i].time}});
    }
    emit(expected / (name + ".json"),
         {{"name", name},
          {"values", Json::array({value("skeleton_nodes", std::move(nodes), "oracle:wavefront"),
                                  value("arcs", o.arcs.size(), "oracle:wavefront"),
                                  value("split_events", o.split_events, "oracle:wavefront")})}});
  }
  const SimplePolygon big = gen_star_polygon(seed * 1000 + 999, 250, 0.3, 400.0);
  emit(polys / "star_250.json", ring_json(big.vertices()));

  for (std::uint64_t k = 0; k < 4; ++k) {
    const Tube t = gen_tube(seed * 1000 + k);
    emit(polys / ("tube_" + std::to_string(k) + ".json"), ring_json(t.polygon.vertices()));
  }

  for (std::uint64_t k = 0; k < 4; ++k) {
    Scene scene;
    for (const RawStroke& stroke : gen_scene_strokes(seed * 1000 + k)) scene.add_part(stroke);
    std::ofstream f(scenes / ("scene_" + std::to_string(k) + ".json"), std::ios::binary);
    f << scene.save();
    ++written;
  }
  return written;
}

}  // namespace skelforge::fixtures
