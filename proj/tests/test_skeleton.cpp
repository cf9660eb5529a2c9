#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "skelforge/error.hpp"
#include "skelforge/fixtures.hpp"
#include "skelforge/skeleton.hpp"
#include "skelforge/sskel.hpp"

using namespace skelforge;

namespace {

Skeleton chain(const std::vector<double>& lengths) {
  Skeleton s;
  double x = 0;
  JointId prev = s.add_joint({x, 0});
  for (double l : lengths) {
    x += l;
    const JointId next = s.add_joint({x, 0});
    s.connect(prev, next);
    prev = next;
  }
  return s;
}

// Hand replay of the collapse rule on a path: repeatedly merge the shortest
// bone while it is below factor * mean. Returns the remaining bone count.
std::size_t replay_path_collapse(std::vector<double> xs, double factor) {
  for (;;) {
    if (xs.size() < 2) return 0;
    double sum = 0;
    std::size_t shortest = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      sum += xs[i + 1] - xs[i];
      if (xs[i + 1] - xs[i] < xs[shortest + 1] - xs[shortest]) shortest = i;
    }
    const double mean = sum / static_cast<double>(xs.size() - 1);
    if (!(xs[shortest + 1] - xs[shortest] < factor * mean)) return xs.size() - 1;
    const double mid = 0.5 * (xs[shortest] + xs[shortest + 1]);
    xs[shortest] = mid;
    xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(shortest) + 1);
  }
}

}  // namespace

TEST_CASE("skeleton from the rectangle and the square") {
  const auto rect = SimplePolygon::from_vertices({{0, 0}, {8, 0}, {8, 4}, {0, 4}});
  const Skeleton r = from_straight_skeleton(extract_straight_skeleton(rect));
  CHECK(r.joint_count() == 2);
  REQUIRE(r.bone_count() == 1);
  CHECK(r.bones()[0].length == doctest::Approx(4));
  const auto sq = SimplePolygon::from_vertices({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const Skeleton s = from_straight_skeleton(extract_straight_skeleton(sq));
  CHECK(s.joint_count() == 1);
  CHECK(s.bone_count() == 0);
  CHECK(s.kind(s.joints().begin()->first) == JointKind::Isolated);
}

TEST_CASE("skeleton counts match the straight skeleton of the L-shape") {
  const auto ell = SimplePolygon::from_vertices({{0, 0}, {6, 0}, {6, 2}, {2, 2}, {2, 6}, {0, 6}});
  const StraightSkeleton ss = extract_straight_skeleton(ell);
  const Skeleton s = from_straight_skeleton(ss);
  CHECK(s.joint_count() == ss.count(SSVertexKind::Skeleton));
  CHECK(s.bone_count() == ss.count(SSEdgeKind::Skeleton));
  CHECK(s.is_forest());
}

TEST_CASE("collapse the short bone of [1, 9]") {
  const Skeleton s = collapse_short_edges(chain({1, 9}), 0.5);
  CHECK(s.bone_count() == 1);
}

TEST_CASE("equal bones never collapse") {
  const Skeleton s = collapse_short_edges(chain({3, 3, 3, 3}), 0.5);
  CHECK(s.bone_count() == 4);
}

TEST_CASE("collapse cascade matches a hand replay") {
  for (const auto& lengths : std::vector<std::vector<double>>{{1, 1, 10}, {1, 2, 3, 20, 1}, {5, 0.5, 0.5, 8, 0.2}}) {
    std::vector<double> xs{0};
    for (double l : lengths) xs.push_back(xs.back() + l);
    const Skeleton s = collapse_short_edges(chain(lengths), 0.5);
    CHECK(s.bone_count() == replay_path_collapse(xs, 0.5));
    CHECK(s.is_forest());
    CHECK(s.components().size() == 1);
    // Fixpoint: nothing left below the threshold.
    const double mean = s.mean_bone_length();
    for (const Bone& b : s.bones()) CHECK(!(b.length < 0.5 * mean));
  }
}

TEST_CASE("branches of a path and a Y") {
  const Skeleton path = chain({1, 1, 1, 1});
  const auto pb = branches(path);
  REQUIRE(pb.size() == 1);
  CHECK(pb[0].joints.size() == 5);

  Skeleton y;
  const JointId c = y.add_joint({0, 0});
  for (int k = 0; k < 3; ++k) {
    const JointId s = y.add_joint({1.0 * (k + 1), 1});
    const JointId t = y.add_joint({2.0 * (k + 1), 2});
    y.connect(c, s);
    y.connect(s, t);
  }
  const auto yb = branches(y);
  REQUIRE(yb.size() == 3);
  for (const Branch& b : yb) {
    CHECK(b.joints.size() == 3);
    CHECK(y.kind(b.joints.front()) != JointKind::Sleeve);
    CHECK(y.kind(b.joints[1]) == JointKind::Sleeve);
    CHECK(y.kind(b.joints.back()) != JointKind::Sleeve);
  }
  CHECK(y.kind(c) == JointKind::Junction);
}

TEST_CASE("branches partition the bones of random trees") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 50; ++k) {
    Skeleton t;
    std::uniform_real_distribution<double> u(0, 100);
    std::vector<JointId> ids{t.add_joint({u(rng), u(rng)})};
    for (int i = 1; i < 20; ++i) {
      const JointId j = t.add_joint({u(rng), u(rng)});
      t.connect(ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)], j);
      ids.push_back(j);
    }
    std::multiset<std::pair<JointId, JointId>> seen;
    std::size_t total = 0;
    for (const Branch& b : branches(t)) {
      total += b.joints.size() - 1;
      for (std::size_t i = 1; i + 1 < b.joints.size(); ++i) CHECK(t.kind(b.joints[i]) == JointKind::Sleeve);
      for (std::size_t i = 0; i + 1 < b.joints.size(); ++i) seen.insert(std::minmax(b.joints[i], b.joints[i + 1]));
    }
    CHECK(total == 19);
    std::multiset<std::pair<JointId, JointId>> all;
    for (const Bone& b : t.bones()) all.insert({b.from, b.to});
    CHECK(seen == all);
  }
}

TEST_CASE("collapse keeps pipeline skeletons connected and acyclic") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto poly = fixtures::gen_star_polygon(seed, 5 + seed % 30);
    const Skeleton raw = from_straight_skeleton(extract_straight_skeleton(poly));
    const Skeleton s = collapse_short_edges(raw, 0.5);
    CHECK(s.is_forest());
    CHECK(s.components().size() == 1);
  }
}

TEST_CASE("graph mutators") {
  Skeleton s;
  const JointId a = s.add_joint({0, 0});
  const JointId b = s.add_joint({2, 0});
  const JointId c = s.add_joint({4, 0});
  s.connect(a, b);
  s.connect(b, c);
  CHECK_THROWS_AS(s.connect(a, a), Error);
  CHECK(s.adjacent(a, b));
  s.contract(a, b, {1, 0});
  CHECK_FALSE(s.has_joint(b));
  CHECK(s.adjacent(a, c));
  CHECK(s.joint(a).position == Point{1, 0});
  s.connect(a, s.add_joint({0, 5}));
  CHECK(s.is_forest());
  const JointId d = s.add_joint({9, 9});
  CHECK(s.components().size() == 2);
  CHECK(s.kind(d) == JointKind::Isolated);
  s.remove_joint(d);
  CHECK(s.next_id() > d);  // ids are not reused
  const Skeleton r = renumbered(s);
  CHECK(r.joints().begin()->first == 0);
  CHECK(canonical_topology(r) == canonical_topology(s));
}

TEST_CASE("canonical topology ignores ids and positions") {
  Skeleton a = chain({1, 2, 3});
  Skeleton b;
  const JointId j0 = b.add_joint({5, 5});
  const JointId j1 = b.add_joint({7, 1});
  const JointId j2 = b.add_joint({0, 3});
  const JointId j3 = b.add_joint({4, 4});
  b.connect(j2, j0);
  b.connect(j0, j3);
  b.connect(j3, j1);
  CHECK(canonical_topology(a) == canonical_topology(b));
  b.connect(j2, b.add_joint({1, 1}));
  CHECK(canonical_topology(a) != canonical_topology(b));
}
