#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>

#include "skelforge/error.hpp"
#include "skelforge/fixtures.hpp"
#include "skelforge/scene.hpp"
#include "skelforge/sskel.hpp"
#include "support.hpp"

using namespace skelforge;
using Json = nlohmann::json;
namespace fs = std::filesystem;

TEST_CASE("star polygons are simple, deterministic and seed dependent") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 3 + seed % 60;
    const SimplePolygon a = fixtures::gen_star_polygon(seed, n);
    CHECK(a.size() == n);
    CHECK(ring_is_simple(a.vertices()));
    CHECK(signed_area(a.vertices()) > 0);
    const SimplePolygon b = fixtures::gen_star_polygon(seed, n);
    CHECK(std::equal(a.vertices().begin(), a.vertices().end(), b.vertices().begin()));
  }
  const SimplePolygon x = fixtures::gen_star_polygon(1, 12);
  const SimplePolygon y = fixtures::gen_star_polygon(2, 12);
  CHECK_FALSE(std::equal(x.vertices().begin(), x.vertices().end(), y.vertices().begin()));
}

TEST_CASE("tubes keep their axis inside") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const fixtures::Tube t = fixtures::gen_tube(seed);
    CHECK(ring_is_simple(t.polygon.vertices()));
    CHECK(t.width > 0);
    CHECK(t.axis.size() >= 6);
    for (const Point& p : t.axis) CHECK(point_in_polygon(p, t.polygon.vertices()));
  }
}

TEST_CASE("outline strokes and scene strokes become valid parts") {
  const RawStroke s = fixtures::outline_stroke({{0, 0}, {100, 0}, {100, 50}, {0, 50}}, 5.0, 1.0, 9);
  CHECK(s.points.size() == 60);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Scene scene;
    const auto strokes = fixtures::gen_scene_strokes(seed);
    CHECK(strokes.size() >= 3);
    for (const RawStroke& st : strokes) CHECK_NOTHROW(scene.add_part(st));
    CHECK(scene.hierarchy().size() == 2 + seed % 3);
  }
}

TEST_CASE("distance oracle") {
  CHECK(fixtures::min_distance_oracle({2, 3}, {{0, 0}, {4, 0}}) == doctest::Approx(3));
  CHECK(fixtures::min_distance_oracle({6, 0}, {{0, 0}, {4, 0}}) == doctest::Approx(2));
  CHECK(fixtures::min_distance_oracle({1, 1}, {{0, 0}, {0, 0}}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("wavefront oracle on analytic shapes") {
  const auto rect = SimplePolygon::from_vertices({{0, 0}, {8, 0}, {8, 4}, {0, 4}});
  const auto o = fixtures::wavefront_oracle(rect, 1e-3);
  REQUIRE(o.nodes.size() == 6);
  CHECK(o.split_events == 0);
  CHECK(o.arcs.size() == 5);
  for (std::size_t i = 4; i < 6; ++i) {
    CHECK(o.nodes[i].time == doctest::Approx(2));
    CHECK(o.nodes[i].position.y == doctest::Approx(2));
  }
  const auto tri = SimplePolygon::from_vertices({{0, 0}, {6, 0}, {0, 8}});
  const auto ot = fixtures::wavefront_oracle(tri, 1e-3);
  REQUIRE(ot.nodes.size() == 4);
  // Incenter of the 6-8-10 triangle: radius 2 at (2, 2).
  CHECK(ot.nodes[3].position.x == doctest::Approx(2));
  CHECK(ot.nodes[3].position.y == doctest::Approx(2));
  CHECK(ot.nodes[3].time == doctest::Approx(2));
}

TEST_CASE("corpus files carry provenance") {
  const fs::path root = fs::temp_directory_path() / "skelforge_corpus_test";
  fs::remove_all(root);
  const std::size_t n = fixtures::write_corpus(root, 1);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root)) files += e.is_regular_file();
  CHECK(files == n);
  CHECK(fs::exists(root / "polygons" / "star_250.json"));
  for (const auto& e : fs::directory_iterator(root / "expected")) {
    std::ifstream f(e.path());
    const Json j = Json::parse(f);
    CHECK(j.contains("name"));
    for (const Json& v : j.at("values")) {
      const std::string p = v.at("provenance");
      CHECK((p == "analytic" || p == "oracle:wavefront" || p == "published"));
    }
  }
  // Expected oracle values agree with the extractor.
  for (const auto& e : fs::directory_iterator(root / "polygons")) {
    if (e.path().stem().string().rfind("star_1", 0) != 0 || e.path().stem() == "star_250") continue;
    std::ifstream pf(e.path()), ef(root / "expected" / e.path().filename());
    std::vector<Point> ring;
    for (const Json& p : Json::parse(pf)) ring.push_back({p[0].get<double>(), p[1].get<double>()});
    const auto ss = extract_straight_skeleton(SimplePolygon::from_vertices(ring));
    const Json ex = Json::parse(ef);
    CHECK(ss.count(WavefrontEventKind::Split) == ex["values"][2]["value"].get<std::size_t>());
    CHECK(ss.count(SSEdgeKind::Skeleton) + ss.count(SSEdgeKind::Peripheral) == ex["values"][1]["value"].get<std::size_t>());
  }
  // Same seed, same bytes.
  const fs::path again = root.string() + "_again";
  fs::remove_all(again);
  fixtures::write_corpus(again, 1);
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream a(e.path()), b(again / fs::relative(e.path(), root));
    const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
  }
  fs::remove_all(root);
  fs::remove_all(again);
}
