// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and sizes are
// pinned below; a failing criterion prints its first counterexample.

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "skelforge/batch.hpp"
#include "skelforge/boundeddp.hpp"
#include "skelforge/connect.hpp"
#include "skelforge/fixtures.hpp"
#include "skelforge/refine.hpp"
#include "skelforge/scene.hpp"
#include "skelforge/service.hpp"
#include "skelforge/sskel.hpp"
#include "support.hpp"

using namespace skelforge;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances and sizes.
constexpr double kAnalyticTol = 1e-9;
constexpr double kAnalyticMs = 1.0;
constexpr int kOracleStars = 200;
constexpr std::size_t kOracleMaxN = 16;
constexpr double kOraclePosFactor = 1e-3;  // times diameter
constexpr double kOracleSeconds = 60.0;
constexpr int kPropertyPolygons = 500;
constexpr std::size_t kPropertyMaxN = 60;
constexpr double kEquidistFactor = 1e-6;  // times diameter
constexpr int kDistancePairs = 10000;
constexpr double kDistanceTol = 1e-6;
constexpr int kTubes = 100;
constexpr int kContainmentSamples = 64;
constexpr double kEpsGrid[] = {1, 2, 5, 10, 20};
constexpr int kScenes = 100;
constexpr double kCliBudgetMs = 50.0;
constexpr std::size_t kCliMaxVertices = 250;
constexpr int kBenchRuns = 20;
constexpr double kAddPartBudgetMs = 100.0;
constexpr double kAnchorPerimeter = 1972.28;
constexpr std::size_t kAnchorPoints = 197;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

std::vector<const SSVertex*> interior(const StraightSkeleton& ss) {
  std::vector<const SSVertex*> out;
  for (const SSVertex& v : ss.vertices) {
    if (v.kind == SSVertexKind::Skeleton) out.push_back(&v);
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a->position.x < b->position.x; });
  return out;
}

std::string analytic_skeletons(std::string& detail) {
  const auto rect = SimplePolygon::from_vertices({{0, 0}, {8, 0}, {8, 4}, {0, 4}});
  const auto square = SimplePolygon::from_vertices({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  auto t0 = Clock::now();
  const StraightSkeleton rs = extract_straight_skeleton(rect);
  const double rect_ms = ms_since(t0);
  t0 = Clock::now();
  const StraightSkeleton ss = extract_straight_skeleton(square);
  const double square_ms = ms_since(t0);
  detail = "rect " + fmt(rect_ms) + " ms, square " + fmt(square_ms) + " ms";

  const auto rv = interior(rs);
  if (rv.size() != 2) return "rectangle has " + std::to_string(rv.size()) + " skeleton vertices";
  if (distance(rv[0]->position, {2, 2}) > kAnalyticTol || distance(rv[1]->position, {6, 2}) > kAnalyticTol) {
    return "rectangle vertices off";
  }
  for (const SSVertex* v : rv) {
    if (std::abs(v->time - 2) > kAnalyticTol) return "rectangle offset time " + fmt(v->time);
  }
  std::size_t skel_edges = 0;
  for (const SSEdge& e : rs.edges) {
    if (e.kind != SSEdgeKind::Skeleton) continue;
    ++skel_edges;
    const double len = distance(rs.vertices[e.from].position, rs.vertices[e.to].position);
    if (std::abs(len - 4) > kAnalyticTol) return "rectangle skeleton edge length " + fmt(len);
  }
  if (skel_edges != 1) return "rectangle has " + std::to_string(skel_edges) + " skeleton edges";

  const auto sv = interior(ss);
  if (sv.size() != 1) return "square has " + std::to_string(sv.size()) + " skeleton vertices";
  if (distance(sv[0]->position, {2, 2}) > kAnalyticTol) return "square vertex off";
  std::size_t degree = 0;
  const std::size_t center = static_cast<std::size_t>(sv[0] - ss.vertices.data());
  for (const SSEdge& e : ss.edges) degree += e.from == center || e.to == center;
  if (degree != 4) return "square vertex degree " + std::to_string(degree);
  if (rect_ms >= kAnalyticMs || square_ms >= kAnalyticMs) return "too slow: " + detail;
  return {};
}

std::string oracle_equivalence(std::string& detail) {
  const auto t0 = Clock::now();
  std::size_t splits = 0;
  for (int seed = 0; seed < kOracleStars; ++seed) {
    const std::size_t n = 3 + static_cast<std::size_t>(seed) % (kOracleMaxN - 2);
    const SimplePolygon poly = fixtures::gen_star_polygon(static_cast<std::uint64_t>(seed), n);
    const StraightSkeleton ss = extract_straight_skeleton(poly);
    const auto oracle = fixtures::wavefront_oracle(poly, poly.diameter() / 1e4);
    splits += oracle.split_events;
    const std::string why = support::compare_with_oracle(ss, oracle, kOraclePosFactor * poly.diameter());
    if (!why.empty()) return "seed " + std::to_string(seed) + " n " + std::to_string(n) + ": " + why;
  }
  const double s = ms_since(t0) / 1000;
  detail = std::to_string(kOracleStars) + " stars, " + std::to_string(splits) + " split events, " + fmt(s) + " s";
  if (s >= kOracleSeconds) return "too slow: " + detail;
  return {};
}

std::string property_suite(std::string& detail) {
  double worst = 0;
  for (int seed = 0; seed < kPropertyPolygons; ++seed) {
    const std::size_t n = 3 + static_cast<std::size_t>(seed) % (kPropertyMaxN - 2);
    const SimplePolygon poly = fixtures::gen_star_polygon(1000 + static_cast<std::uint64_t>(seed), n);
    const StraightSkeleton ss = extract_straight_skeleton(poly);
    const std::string where = "seed " + std::to_string(1000 + seed) + " n " + std::to_string(n);
    const double err = support::equidistance_error(ss);
    if (err < 0) return where + ": skeleton vertex with fewer than 3 defining edges";
    worst = std::max(worst, err / poly.diameter());
    if (err > kEquidistFactor * poly.diameter()) return where + ": equidistance error " + fmt(err);
    if (!support::contained(ss)) return where + ": geometry outside the polygon";
    if (!support::euler_consistent(ss)) return where + ": Euler check failed";
  }
  detail = "worst equidistance " + fmt(worst) + " x diameter";
  return {};
}

std::string distance_oracle(std::string& detail) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-100, 100);
  std::size_t perpendicular = 0;
  double worst = 0;
  for (int k = 0; k < kDistancePairs; ++k) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, p{u(rng), u(rng)};
    const BoneJointDistance d = bone_joint_distance(a, b, p);
    const double oracle = fixtures::min_distance_oracle(p, {a, b});
    const double err = std::abs(d.distance - oracle);
    worst = std::max(worst, err);
    if (err > kDistanceTol) return "pair " + std::to_string(k) + ": " + fmt(d.distance) + " vs " + fmt(oracle);
    const bool slab = dot(b - a, p - a) >= 0 && dot(a - b, p - b) >= 0;
    if ((d.kind == DistanceCase::Perpendicular) != slab) return "pair " + std::to_string(k) + ": case flag";
    perpendicular += slab;
  }
  detail = std::to_string(perpendicular) + " perpendicular cases, worst error " + fmt(worst);
  return {};
}

Skeleton axis_path(const std::vector<Point>& pts, Branch* branch) {
  Skeleton s;
  JointId prev = s.add_joint(pts.front());
  branch->joints = {prev};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const JointId j = s.add_joint(pts[i]);
    s.connect(prev, j);
    branch->joints.push_back(j);
    prev = j;
  }
  return s;
}

std::string boundeddp_postconditions(std::string& detail) {
  std::size_t segments = 0, shrunk = 0;
  for (int seed = 0; seed < kTubes; ++seed) {
    const fixtures::Tube t = fixtures::gen_tube(static_cast<std::uint64_t>(seed));
    Branch b;
    const Skeleton s = axis_path(t.axis, &b);
    const std::string where = "tube " + std::to_string(seed);
    const auto r = bounded_dp(s, b, t.polygon, {});
    if (!r) return where + ": no simplification";
    const auto& line = r->result.polyline;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      ++segments;
      if (!segment_inside_region({line[i], line[i + 1]}, r->cylinder.omega, kContainmentSamples)) {
        return where + ": edge " + std::to_string(i) + " leaves its region";
      }
    }
    shrunk += line.size() < r->cylinder.size();

    // Unbounded region, no shape term: classic DP on the axis samples.
    const auto& pts = r->cylinder.axis.points;
    BoundedDPConfig plain;
    plain.alpha_s = 0;
    for (double eps : kEpsGrid) {
      const auto free = bounded_dp_tune(r->cylinder, eps, plain, [](const Segment&) { return true; });
      if (free.polyline != dp_simplify(pts, eps)) return where + ": differs from classic DP at eps " + fmt(eps);
    }
    // Retained sets shrink as eps grows.
    std::vector<bool> prev(pts.size(), true);
    for (double eps : kEpsGrid) {
      const auto keep = bounded_dp_select(r->cylinder, 0, pts.size() - 1, eps, 1.0);
      for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] && !prev[i]) return where + ": retained set grows at eps " + fmt(eps);
      }
      prev = keep;
    }
  }
  detail = std::to_string(segments) + " edges checked, " + std::to_string(shrunk) + " tubes simplified";
  return {};
}

PartPolygons world_polygons(const Scene& s) {
  PartPolygons out;
  for (const Subpart& p : s.parts()) out.emplace(p.id, p.world_polygon());
  return out;
}

Scene raw_scene(std::uint64_t seed) {
  SceneConfig cfg;
  cfg.refine.eps_s = cfg.refine.eps_m = cfg.refine.eps_t = cfg.refine.eps_c = 0;
  Scene s(cfg);
  for (const RawStroke& st : fixtures::gen_scene_strokes(seed)) s.add_part(st);
  return s;
}

std::string refinement_invariants(std::string& detail) {
  const RefineConfig defaults;
  std::size_t joints_raw = 0, joints_refined = 0;
  for (int seed = 0; seed < kScenes; ++seed) {
    const Scene scene = raw_scene(static_cast<std::uint64_t>(seed));
    const Skeleton g = scene.global_skeleton();
    const std::string where = "scene " + std::to_string(seed);
    if (!g.is_forest()) return where + ": unrefined skeleton is not a forest";
    const std::size_t comps = g.components().size();
    std::size_t prev[3] = {SIZE_MAX, SIZE_MAX, SIZE_MAX};
    for (double f : {0.0, 1.0, 2.0}) {
      const Skeleton out[3] = {merge_joints(g, f * defaults.eps_m), prune_branches(g, f * defaults.eps_t),
                               collapse_edges(g, f * defaults.eps_c)};
      const char* names[3] = {"merge", "prune", "collapse"};
      for (int k = 0; k < 3; ++k) {
        const std::string at = where + " " + names[k] + " x" + fmt(f);
        if (!out[k].is_forest()) return at + ": not a forest";
        if (out[k].components().size() != comps) return at + ": component count changed";
        if (out[k].joint_count() > prev[k]) return at + ": joint count grew with the threshold";
        prev[k] = out[k].joint_count();
      }
    }
    const PartPolygons polys = world_polygons(scene);
    const Skeleton once = refine(g, defaults, polys);
    const Skeleton twice = refine(once, defaults, polys);
    if (canonical_topology(once) != canonical_topology(twice) || support::bone_pairs(once) != support::bone_pairs(twice)) {
      return where + ": refine is not idempotent";
    }
    for (const auto& [id, j] : once.joints()) {
      if (twice.joint(id).position != j.position) return where + ": second refine moved a joint";
    }
    joints_raw += g.joint_count();
    joints_refined += once.joint_count();
  }
  detail = std::to_string(joints_raw) + " joints before refinement, " + std::to_string(joints_refined) + " after";
  return {};
}

// Each child has one parent, no cycles, edges sorted by child seq.
std::string hierarchy_forest(const Scene& s) {
  std::map<PartId, PartId> parent;
  for (std::size_t i = 0; i < s.hierarchy().size(); ++i) {
    const HierarchyEdge& e = s.hierarchy()[i];
    if (!parent.emplace(e.child, e.parent).second) return "part with two parents";
    if (i > 0 && s.part(s.hierarchy()[i - 1].child).seq >= s.part(e.child).seq) return "edges out of seq order";
  }
  for (const auto& [child, p] : parent) {
    std::set<PartId> seen{child};
    for (auto it = parent.find(child); it != parent.end(); it = parent.find(it->second)) {
      if (!seen.insert(it->second).second) return "cycle through part " + std::to_string(child);
    }
  }
  return {};
}

Json points_json(const RawStroke& s) {
  Json pts = Json::array();
  for (Point p : s.points) pts.push_back({p.x, p.y});
  return pts;
}

std::string connection_bookkeeping(std::string& detail) {
  std::size_t splits = 0, connects = 0;
  // Direct attaches between part skeletons.
  for (int seed = 0; seed < kScenes; ++seed) {
    const Scene scene = raw_scene(static_cast<std::uint64_t>(seed));
    const std::string where = "scene " + std::to_string(seed);
    for (const HierarchyEdge& e : scene.hierarchy()) {
      const Skeleton parent = scene.part(e.parent).world_skeleton();
      const Skeleton child = scene.part(e.child).world_skeleton();
      const AttachOutcome out = attach(parent, child);
      const std::size_t dj = out.combined.joint_count() - parent.joint_count() - child.joint_count();
      const std::size_t db = out.combined.bone_count() - parent.bone_count() - child.bone_count();
      const bool split = out.choice.type == AttachType::BoneSplit;
      if (dj != (split ? 1u : 0u) || db != (split ? 2u : 1u)) {
        return where + ": attach added " + std::to_string(dj) + " joints and " + std::to_string(db) + " bones";
      }
      if (!out.combined.is_forest()) return where + ": attach made a cycle";
      split ? ++splits : ++connects;
    }
    // Whole-scene count: every edge adds its joints and bones once.
    std::size_t joints = 0, bones = 0;
    for (const Subpart& p : scene.parts()) {
      joints += p.skeleton.joint_count();
      bones += p.skeleton.bone_count();
    }
    for (const HierarchyEdge& e : scene.hierarchy()) {
      joints += e.type == AttachType::BoneSplit;
      bones += e.type == AttachType::BoneSplit ? 2 : 1;
    }
    const Skeleton& g = scene.global_skeleton();
    if (g.joint_count() != joints || g.bone_count() != bones) return where + ": global counts off";
    const std::string why = hierarchy_forest(scene);
    if (!why.empty()) return where + ": " + why;

    // Moves keep the hierarchy a forest.
    Scene moved = scene;
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> shift(-150, 150);
    for (const Subpart& p : std::vector<Subpart>(moved.parts())) {
      Transform2 t = p.transform;
      t.tx += shift(rng);
      t.ty += shift(rng);
      moved.move_part(p.id, t);
      const std::string after = hierarchy_forest(moved);
      if (!after.empty()) return where + " after moves: " + after;
      if (!moved.global_skeleton().is_forest()) return where + " after moves: skeleton has a cycle";
    }
  }

  // Random parents and children, placed so both attach types occur.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-40, 40);
  for (int k = 0; k < 1000; ++k) {
    Skeleton parent;
    JointId prev = parent.add_joint({u(rng), u(rng)});
    for (int i = 0; i < 3; ++i) {
      const JointId j = parent.add_joint({u(rng), u(rng)});
      parent.connect(prev, j);
      prev = j;
    }
    Skeleton child;
    const JointId c = child.add_joint({u(rng) * 3, u(rng) * 3});
    if (k % 2) child.connect(c, child.add_joint({u(rng) * 3, u(rng) * 3}));
    const AttachOutcome out = attach(parent, child);
    const std::size_t dj = out.combined.joint_count() - parent.joint_count() - child.joint_count();
    const std::size_t db = out.combined.bone_count() - parent.bone_count() - child.bone_count();
    const bool split = out.choice.type == AttachType::BoneSplit;
    if (dj != (split ? 1u : 0u) || db != (split ? 2u : 1u) || !out.combined.is_forest() ||
        out.combined.components().size() != 1) {
      return "random attach " + std::to_string(k) + " bookkeeping off";
    }
    split ? ++splits : ++connects;
  }

  // Replaying a message log gives the same document bytes.
  const fs::path dir = fs::temp_directory_path() / ("skelforge_acceptance_" + std::to_string(::getpid()));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<Json> log;
    int id = 0;
    for (const RawStroke& st : fixtures::gen_scene_strokes(seed)) {
      log.push_back({{"id", ++id}, {"kind", "CreatePart"}, {"payload", {{"points", points_json(st)}}}});
    }
    log.push_back({{"id", ++id}, {"kind", "MovePart"}, {"payload", {{"part", 1}, {"transform", {{"tx", 20}, {"rot", 0.2}}}}}});
    log.push_back({{"id", ++id}, {"kind", "SetConfig"}, {"payload", {{"eps_c", 15}}}});
    log.push_back({{"id", ++id}, {"kind", "SaveScene"}});
    std::string docs[2];
    for (std::string& doc : docs) {
      fs::remove_all(dir);
      Session session(dir);
      Json last;
      for (const Json& m : log) last = session.handle(m);
      if (last["status"] != "OK") return "replay " + std::to_string(seed) + ": " + last.dump();
      doc = last["result"]["document"].dump();
    }
    if (docs[0] != docs[1]) return "replay " + std::to_string(seed) + ": documents differ";
  }
  fs::remove_all(dir);
  detail = std::to_string(splits) + " bone splits, " + std::to_string(connects) + " joint connects, 10 replays";
  return {};
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(SKELFORGE_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return "popen failed";
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = ::pclose(p);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return "cli failed: " + out;
  return {};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

std::string performance(std::string& detail) {
  const fs::path in = fs::temp_directory_path() / ("skelforge_perf_in_" + std::to_string(::getpid()));
  const fs::path out = fs::temp_directory_path() / ("skelforge_perf_out_" + std::to_string(::getpid()));
  fs::remove_all(in);
  fs::remove_all(out);
  fs::create_directories(in);
  for (std::size_t n : {16u, 32u, 64u, 128u, 200u, 250u}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const SimplePolygon poly = fixtures::gen_star_polygon(seed * 977 + n, n, 0.5, 300.0);
      Json ring = Json::array();
      for (Point v : poly.vertices()) ring.push_back({v.x, v.y});
      std::ofstream(in / ("star_" + std::to_string(n) + "_" + std::to_string(seed) + ".json")) << ring.dump();
    }
  }
  const fs::path csv = out / "times.csv";
  const std::string err = run_cli("--in " + in.string() + " --out " + out.string() + " --csv " + csv.string() +
                                  " --bench " + std::to_string(kBenchRuns));
  if (!err.empty()) return err;
  std::ifstream f(csv);
  std::string line, worst_name;
  std::getline(f, line);
  double worst = 0;
  std::size_t rows = 0;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() != 9) return "bad csv row: " + line;
    ++rows;
    if (std::stoul(cells[1]) > kCliMaxVertices) continue;
    const double total = std::stod(cells[8]);
    if (total > worst) {
      worst = total;
      worst_name = cells[0];
    }
  }
  fs::remove_all(in);
  fs::remove_all(out);
  if (rows != 18) return "expected 18 csv rows, got " + std::to_string(rows);

  // add_part on top of an existing scene, median of repeated runs.
  double worst_add = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto strokes = fixtures::gen_scene_strokes(seed);
    std::vector<double> times;
    for (int r = 0; r < 5; ++r) {
      Scene s;
      for (std::size_t i = 0; i + 1 < strokes.size(); ++i) s.add_part(strokes[i]);
      const auto t0 = Clock::now();
      s.add_part(strokes.back());
      s.global_skeleton();
      times.push_back(ms_since(t0));
    }
    worst_add = std::max(worst_add, median(times));
  }
  // A detailed outline on its own.
  const SimplePolygon star = fixtures::gen_star_polygon(7, 250, 0.5, 600.0);
  const RawStroke big = fixtures::outline_stroke({star.vertices().begin(), star.vertices().end()}, 3.0);
  std::vector<double> times;
  for (int r = 0; r < 5; ++r) {
    Scene s;
    const auto t0 = Clock::now();
    s.add_part(big);
    s.global_skeleton();
    times.push_back(ms_since(t0));
  }
  worst_add = std::max(worst_add, median(times));
  detail = "worst cli median " + fmt(worst) + " ms (" + worst_name + "), worst add_part " + fmt(worst_add) + " ms";
  if (worst >= kCliBudgetMs) return "cli too slow: " + detail;
  if (worst_add >= kAddPartBudgetMs) return "add_part too slow: " + detail;
  return {};
}

std::string stroke_anchor(std::string& detail) {
  // Circle of the anchor perimeter, sampled densely enough that the polyline
  // perimeter matches to well under a step.
  const double r = kAnchorPerimeter / (2 * std::numbers::pi);
  RawStroke s;
  s.closed = true;
  for (int i = 0; i < 20000; ++i) {
    const double a = 2 * std::numbers::pi * i / 20000;
    s.points.push_back({r * std::cos(a), r * std::sin(a)});
  }
  const double len = perimeter(s.points);
  const auto pts = uniform_discretize(s, 10);
  detail = "perimeter " + fmt(len) + ", " + std::to_string(pts.size()) + " points";
  if (pts.size() != kAnchorPoints) return detail;
  return {};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<std::string(std::string&)> run;
  };
  const Criterion criteria[] = {
      {1, "analytic rectangle and square skeletons", analytic_skeletons},
      {2, "wavefront oracle equivalence on stars", oracle_equivalence},
      {3, "equidistance, containment and Euler properties", property_suite},
      {4, "bone to joint distance against sampling", distance_oracle},
      {5, "bounded DP postconditions on tubes", boundeddp_postconditions},
      {6, "refinement invariants on scenes", refinement_invariants},
      {7, "connection bookkeeping and replay", connection_bookkeeping},
      {8, "desk-scale performance", performance},
      {9, "stroke discretization anchor", stroke_anchor},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    std::string detail, why;
    const auto t0 = Clock::now();
    try {
      why = c.run(detail);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double s = ms_since(t0) / 1000;
    std::cout << (why.empty() ? "PASS " : "FAIL ") << c.number << " " << c.title << " [" << fmt(s) << " s]";
    if (!why.empty()) std::cout << " : " << why;
    else if (!detail.empty()) std::cout << " : " << detail;
    std::cout << std::endl;
    failed += !why.empty();
  }
  return failed == 0 ? 0 : 1;
}
