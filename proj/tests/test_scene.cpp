#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "skelforge/error.hpp"
#include "skelforge/fixtures.hpp"
#include "skelforge/scene.hpp"
#include "support.hpp"

using namespace skelforge;

namespace {

RawStroke capsule(Point a, Point b, double hw) {
  return fixtures::outline_stroke(fixtures::capsule_outline(a, b, hw), 4.0);
}

RawStroke rect_stroke(double x0, double y0, double w, double h) {
  return fixtures::outline_stroke({{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}}, 4.0);
}

std::size_t junctions(const Skeleton& s) {
  std::size_t n = 0;
  for (const auto& [id, j] : s.joints()) n += s.kind(id) == JointKind::Junction;
  return n;
}

std::vector<Point> sorted_positions(const Skeleton& s) {
  std::vector<Point> out;
  for (const auto& [id, j] : s.joints()) out.push_back(j.position);
  std::sort(out.begin(), out.end(), [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  return out;
}

Scene torso_with_limbs() {
  Scene s;
  s.add_part(capsule({200, 300}, {600, 300}, 60));
  s.add_part(capsule({250, 300}, {250, 560}, 20));
  s.add_part(capsule({550, 300}, {550, 560}, 20));
  s.add_part(capsule({250, 300}, {250, 40}, 20));
  s.add_part(capsule({550, 300}, {550, 40}, 20));
  return s;
}

}  // namespace

TEST_CASE("rectangle stroke gives a two-joint skeleton on the long axis") {
  Scene s;
  StageTimings t;
  const PartId id = s.add_part(rect_stroke(100, 100, 400, 100), &t);
  const Subpart& p = s.part(id);
  REQUIRE(p.skeleton.joint_count() == 2);
  for (const auto& [jid, j] : p.skeleton.joints()) {
    CHECK(j.position.y == doctest::Approx(150).epsilon(0.01));
    CHECK(j.radius == doctest::Approx(50).epsilon(0.05));
  }
  const auto bones = p.skeleton.bones();
  REQUIRE(bones.size() == 1);
  CHECK(bones[0].length == doctest::Approx(300).epsilon(0.03));
  CHECK(s.hierarchy().empty());
  CHECK(s.roots() == std::vector<PartId>{id});
  CHECK(t.total >= t.sskel);
}

TEST_CASE("overlapping stroke becomes a child of the first part") {
  Scene s;
  const PartId torso = s.add_part(capsule({200, 300}, {600, 300}, 60));
  const PartId leg = s.add_part(capsule({300, 300}, {300, 560}, 20));
  REQUIRE(s.hierarchy().size() == 1);
  CHECK(s.hierarchy()[0].parent == torso);
  CHECK(s.hierarchy()[0].child == leg);
  CHECK(s.parent_edge(leg).has_value());
  CHECK_FALSE(s.parent_edge(torso).has_value());
}

TEST_CASE("disjoint parts are both roots") {
  Scene s;
  s.add_part(capsule({0, 0}, {100, 0}, 20));
  s.add_part(capsule({500, 500}, {600, 500}, 20));
  CHECK(s.hierarchy().empty());
  CHECK(s.roots().size() == 2);
  CHECK(s.global_skeleton().components().size() == 2);
}

TEST_CASE("moving parts re-parents or detaches only that part") {
  Scene s;
  const PartId torso = s.add_part(capsule({200, 300}, {600, 300}, 60));
  const PartId head = s.add_part(capsule({760, 300}, {860, 300}, 50));
  const PartId arm = s.add_part(capsule({560, 300}, {560, 520}, 20));
  CHECK(s.roots().size() == 2);
  REQUIRE(s.parent_edge(arm));
  CHECK(s.parent_edge(arm)->parent == torso);
  const auto before = s.hierarchy();

  s.move_part(arm, {});
  CHECK(s.hierarchy() == before);

  s.move_part(arm, {250, 0, 0, 1});
  REQUIRE(s.parent_edge(arm));
  CHECK(s.parent_edge(arm)->parent == head);

  s.move_part(arm, {0, 2000, 0, 1});
  CHECK_FALSE(s.parent_edge(arm));
  CHECK(s.roots().size() == 3);

  CHECK_THROWS_AS(s.move_part(99, {}), Error);
  CHECK_THROWS_AS(s.move_part(arm, {0, 0, 0, 0}), Error);
}

TEST_CASE("torso with four limbs assembles into one tree") {
  const Scene s = torso_with_limbs();
  CHECK(s.hierarchy().size() == 4);
  CHECK(s.roots().size() == 1);
  const Skeleton& g = s.global_skeleton();
  CHECK(g.is_forest());
  CHECK(g.components().size() == 1);
  CHECK(junctions(g) <= 4);
  for (std::size_t i = 1; i < s.hierarchy().size(); ++i) {
    CHECK(s.part(s.hierarchy()[i - 1].child).seq < s.part(s.hierarchy()[i].child).seq);
  }
}

TEST_CASE("assembly is deterministic and translation covariant") {
  Scene s = torso_with_limbs();
  const Skeleton a = s.assemble_global_skeleton();
  const Skeleton b = s.assemble_global_skeleton();
  CHECK(canonical_topology(a) == canonical_topology(b));
  CHECK(sorted_positions(a) == sorted_positions(b));

  for (const Subpart& p : std::vector<Subpart>(s.parts())) {
    Transform2 t = p.transform;
    t.tx += 37.5;
    t.ty -= 12.25;
    s.move_part(p.id, t);
  }
  const Skeleton c = s.assemble_global_skeleton();
  CHECK(canonical_topology(c) == canonical_topology(a));
  const auto pa = sorted_positions(a), pc = sorted_positions(c);
  REQUIRE(pa.size() == pc.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pc[i].x - pa[i].x == doctest::Approx(37.5));
    CHECK(pc[i].y - pa[i].y == doctest::Approx(-12.25));
  }
}

TEST_CASE("re-adding the same strokes reproduces the hierarchy") {
  CHECK(torso_with_limbs().hierarchy() == torso_with_limbs().hierarchy());
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Scene a, b;
    for (const RawStroke& st : fixtures::gen_scene_strokes(seed)) {
      a.add_part(st);
      b.add_part(st);
    }
    CHECK(a.save() == b.save());
  }
}

TEST_CASE("save and load round trip") {
  const Scene empty;
  CHECK(Scene::load(empty.save()) == empty);

  Scene s;
  for (const RawStroke& st : fixtures::gen_scene_strokes(3)) s.add_part(st);
  s.move_part(s.parts().back().id, {5, -3, 0.1, 1.2});
  const Scene back = Scene::load(s.save());
  CHECK(back.save() == s.save());
  REQUIRE(back.parts().size() == s.parts().size());
  for (std::size_t i = 0; i < s.parts().size(); ++i) CHECK(back.parts()[i].seq == s.parts()[i].seq);
  CHECK(canonical_topology(back.global_skeleton()) == canonical_topology(s.global_skeleton()));

  // Ids keep counting after a load.
  Scene grown = Scene::load(s.save());
  const PartId fresh = grown.add_part(capsule({0, 900}, {100, 900}, 20));
  CHECK(fresh > s.parts().back().id);
}

TEST_CASE("documents from another version or malformed ones are rejected") {
  std::string doc = Scene().save();
  const auto at = doc.find("skelforge/1");
  REQUIRE(at != std::string::npos);
  doc.replace(at, 11, "skelforge/2");
  try {
    Scene::load(doc);
    FAIL("expected SchemaVersionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaVersionMismatch);
  }
  for (const char* bad : {"{", "[]", R"({"version":"skelforge/1"})",
                          R"({"version":"skelforge/1","config":{},"parts":[{"id":0}],"hierarchy":[]})"}) {
    try {
      Scene::load(bad);
      FAIL("expected MalformedDocument");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedDocument);
    }
  }
}

TEST_CASE("config changes invalidate the cached skeleton") {
  Scene s = torso_with_limbs();
  const std::size_t before = s.global_skeleton().joint_count();
  SceneConfig cfg = s.config();
  cfg.refine.eps_m = 0;
  cfg.refine.eps_t = 0;
  cfg.refine.eps_c = 0;
  s.set_config(cfg);
  CHECK(s.global_skeleton().joint_count() >= before);
  cfg.bdp.alpha = 1.5;
  CHECK_THROWS_AS(s.set_config(cfg), Error);
}

TEST_CASE("subpart scope keeps other parts fixed in the global skeleton") {
  Scene s = torso_with_limbs();
  SceneConfig cfg = s.config();
  cfg.refine.eps_m = cfg.refine.eps_t = cfg.refine.eps_c = 0;
  s.set_config(cfg);
  const Skeleton base = s.global_skeleton();
  cfg.refine = RefineConfig{};
  s.set_config(cfg);
  s.set_scope(RefineScope::subpart(1));
  const Skeleton scoped = s.global_skeleton();
  for (const auto& [id, j] : base.joints()) {
    if (j.part == 1) continue;
    REQUIRE(scoped.has_joint(id));
    CHECK(scoped.joint(id).position == j.position);
  }
  CHECK_THROWS_AS(s.set_scope(RefineScope::subpart(77)), Error);
}
