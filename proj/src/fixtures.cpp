#include "skelforge/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>

#include "skelforge/error.hpp"

namespace skelforge::fixtures {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SimplePolygon gen_star_polygon(std::uint64_t seed, std::size_t n, double jitter, double radius) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "star polygon needs n >= 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (;;) {
    std::vector<Point> v;
    for (std::size_t i = 0; i < n; ++i) {
      const double sector = kTwoPi / static_cast<double>(n);
      const double a = sector * (static_cast<double>(i) + 0.35 * unit(rng));
      const double r = radius * std::max(0.15, 1.0 + jitter * unit(rng));
      v.push_back({r * std::cos(a), r * std::sin(a)});
    }
    try {
      return SimplePolygon::from_vertices(std::move(v));
    } catch (const Error&) {
      // Collinear triple or similar; draw again from the same stream.
    }
  }
}

RawStroke outline_stroke(const std::vector<Point>& outline, double spacing, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  RawStroke s;
  for (std::size_t i = 0; i < outline.size(); ++i) {
    const Point a = outline[i];
    const Point b = outline[(i + 1) % outline.size()];
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(distance(a, b) / spacing)));
    for (std::size_t k = 0; k < steps; ++k) {
      Point p = lerp(a, b, static_cast<double>(k) / static_cast<double>(steps));
      if (jitter > 0.0) p += Point{jitter * unit(rng), jitter * unit(rng)};
      s.points.push_back(p);
    }
  }
  s.closed = true;
  return s;
}

std::vector<Point> ellipse_outline(Point center, double rx, double ry, double rot, std::size_t n) {
  std::vector<Point> out;
  const double c = std::cos(rot), s = std::sin(rot);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    const double x = rx * std::cos(a), y = ry * std::sin(a);
    out.push_back({center.x + c * x - s * y, center.y + s * x + c * y});
  }
  return out;
}

std::vector<Point> capsule_outline(Point a, Point b, double half_width, std::size_t cap_points) {
  const Vec2 d = normalized(b - a);
  const Vec2 nrm = perp_left(d);
  std::vector<Point> out;
  // Right side a->b, cap around b, left side b->a, cap around a.
  out.push_back(a - nrm * half_width);
  out.push_back(b - nrm * half_width);
  for (std::size_t k = 1; k < cap_points; ++k) {
    const double t = -std::numbers::pi / 2 + std::numbers::pi * static_cast<double>(k) / static_cast<double>(cap_points);
    out.push_back(b + d * (half_width * std::cos(t)) + nrm * (half_width * std::sin(t)));
  }
  out.push_back(b + nrm * half_width);
  out.push_back(a + nrm * half_width);
  for (std::size_t k = 1; k < cap_points; ++k) {
    const double t = std::numbers::pi / 2 + std::numbers::pi * static_cast<double>(k) / static_cast<double>(cap_points);
    out.push_back(a + d * (half_width * std::cos(t)) + nrm * (half_width * std::sin(t)));
  }
  return out;
}

Tube gen_tube(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int shape = static_cast<int>(seed % 3);
  const double length = 200.0 + 200.0 * u01(rng);
  const double width = 20.0 + 30.0 * u01(rng);  // diameter
  const double half = width / 2;
  const double bump = 0.25 * u01(rng);
  const double rot = kTwoPi * u01(rng);
  const double bend = shape == 0 ? 0.0 : (0.3 + 0.5 * u01(rng)) / (3.0 * half);

  // Arclength-parameterized centerline with curvature k(s).
  auto curvature = [&](double s) {
    if (shape == 1) return bend;
    if (shape == 2) return bend * std::cos(kTwoPi * s / length);
    return 0.0;
  };
  const int n = 200;
  std::vector<Point> center;
  std::vector<Vec2> tangent;
  Point p{0, 0};
  double heading = rot;
  const double ds = length / n;
  for (int i = 0; i <= n; ++i) {
    center.push_back(p);
    tangent.push_back({std::cos(heading), std::sin(heading)});
    heading += curvature(i * ds) * ds;
    p += Point{std::cos(heading), std::sin(heading)} * ds;
  }
  auto half_width = [&](int i) { return half * (1.0 + bump * std::sin(3.0 * kTwoPi * i / n)); };

  std::vector<Point> ring;
  for (int i = 0; i <= n; i += 4) ring.push_back(center[i] - perp_left(tangent[i]) * half_width(i));
  for (int i = n; i >= 0; i -= 4) ring.push_back(center[i] + perp_left(tangent[i]) * half_width(i));

  Tube t{SimplePolygon::from_vertices(ring), {}, width};
  const int joints = 6 + static_cast<int>(seed % 5);
  for (int k = 0; k < joints; ++k) {
    const int i = static_cast<int>(std::lround(0.06 * n + 0.88 * n * k / (joints - 1.0)));
    t.axis.push_back(center[i]);
  }
  return t;
}

std::vector<RawStroke> gen_scene_strokes(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<RawStroke> out;
  const Point torso{500, 400};
  const double rx = 140 + 60 * u01(rng), ry = 50 + 20 * u01(rng);
  const double trot = 0.3 * (u01(rng) - 0.5);
  out.push_back(outline_stroke(ellipse_outline(torso, rx, ry, trot, 72), 3.0, 0.5, seed * 7 + 1));

  const int limbs = 2 + static_cast<int>(seed % 3);
  for (int k = 0; k < limbs; ++k) {
    const double a = kTwoPi * (k + 0.2 + 0.6 * u01(rng)) / limbs;
    // Limbs start on the torso's long axis so their root end lies inside it.
    const double along = 0.5 * rx * std::cos(a);
    const Point anchor{torso.x + along * std::cos(trot), torso.y + along * std::sin(trot)};
    const double len = 120 + 80 * u01(rng);
    const Point tip = anchor + Point{std::cos(a), std::sin(a)} * len;
    const double hw = 14 + 8 * u01(rng);
    out.push_back(outline_stroke(capsule_outline(anchor, tip, hw), 3.0, 0.5, seed * 7 + 2 + k));
  }
  if (seed % 4 == 0) {
    const Point far{torso.x + 600, torso.y - 300};
    out.push_back(outline_stroke(capsule_outline(far, far + Point{160, 40}, 20), 3.0, 0.5, seed * 7 + 6));
  }
  return out;
}

double min_distance_oracle(Point p, const Segment& s, std::size_t n_samples) {
  n_samples = std::max<std::size_t>(n_samples, 2);
  const double last = static_cast<double>(n_samples - 1);
  auto at = [&](double t) { return distance(p, lerp(s.a, s.b, t)); };
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double d = at(static_cast<double>(i) / last);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  // The distance is convex along the segment, so the minimum lies between the
  // neighbours of the best sample; narrow that bracket by ternary search.
  double lo = static_cast<double>(best_i == 0 ? 0 : best_i - 1) / last;
  double hi = static_cast<double>(std::min(best_i + 1, n_samples - 1)) / last;
  for (int k = 0; k < 100; ++k) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (at(m1) < at(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::min(best, at(0.5 * (lo + hi)));
}

namespace {

constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

struct OracleVertex {
  std::size_t in;
  std::size_t out;
  std::size_t node;  // kNoNode for helper vertices placed on an edge
  Point origin;
  double birth;
};

using Loop = std::vector<OracleVertex>;

class Stepper {
 public:
  Stepper(const SimplePolygon& poly, double dt) : poly_(poly), dt_(dt) {
    const double diam = poly.diameter();
    tol_pos_ = 1e-7 * diam;
    tol_time_ = 1e-7 * diam;
    horizon_ = diam;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Segment e = poly.edge(i);
      const Vec2 d = e.direction() / e.length();
      dir_.push_back(d);
      nrm_.push_back({-d.y, d.x});
      off_.push_back(nrm_.back().x * e.a.x + nrm_.back().y * e.a.y);
      out_.nodes.push_back({poly.vertex(i), 0.0, true});
    }
    Loop first;
    for (std::size_t i = 0; i < n; ++i) first.push_back({(i + n - 1) % n, i, i, poly.vertex(i), 0.0});
    loops_.push_back(std::move(first));
  }

  OracleSkeleton run() {
    double t = 0.0;
    std::size_t guard = 0;
    while (!loops_.empty()) {
      if (t > horizon_ || ++guard > 10'000'000) {
        throw Error(ErrorCode::OracleResolution, "wavefront did not vanish");
      }
      const double t1 = t + dt_;
      std::optional<double> first;
      for (const Loop& loop : loops_) {
        if (auto e = earliest_event(loop, t, t1); e && (!first || *e < *first)) first = e;
      }
      if (!first) {
        t = t1;
        continue;
      }
      t = *first;
      rebuild(t);
    }
    return std::move(out_);
  }

 private:
  // Offset-line intersection of the vertex's two edges at time t.
  Point position(const OracleVertex& v, double t) const {
    const Vec2 a = nrm_[v.in], b = nrm_[v.out];
    const double det = a.x * b.y - a.y * b.x;
    if (std::abs(det) > 1e-9) {
      const double ca = off_[v.in] + t, cb = off_[v.out] + t;
      return {(ca * b.y - a.y * cb) / det, (a.x * cb - ca * b.x) / det};
    }
    if (a.x * b.x + a.y * b.y > 0.0) return v.origin + a * (t - v.birth);
    return v.origin;
  }

  bool reflex(const OracleVertex& v) const {
    return v.node != kNoNode && (dir_[v.in].x * dir_[v.out].y - dir_[v.in].y * dir_[v.out].x) < -1e-12;
  }

  template <class F>
  static double bisect(F&& g, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) > 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  std::optional<double> earliest_event(const Loop& loop, double t0, double t1) const {
    std::optional<double> best;
    const std::size_t m = loop.size();
    auto consider = [&best](double t) {
      if (!best || t < *best) best = t;
    };
    for (std::size_t i = 0; i < m; ++i) {
      const OracleVertex& u = loop[i];
      const OracleVertex& v = loop[(i + 1) % m];
      const Vec2 d = dir_[u.out];
      auto length = [&](double t) {
        const Point pu = position(u, t), pv = position(v, t);
        return (pv.x - pu.x) * d.x + (pv.y - pu.y) * d.y;
      };
      if (length(t0) > 0.0 && length(t1) <= 0.0) consider(bisect(length, t0, t1));
    }
    for (std::size_t i = 0; i < m; ++i) {
      const OracleVertex& r = loop[i];
      if (!reflex(r)) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t jn = (j + 1) % m;
        if (j == i || jn == i) continue;
        const std::size_t e = loop[j].out;
        auto ahead = [&](double t) {
          const Point p = position(r, t);
          return nrm_[e].x * p.x + nrm_[e].y * p.y - off_[e] - t;
        };
        if (!(ahead(t0) > 0.0 && ahead(t1) <= 0.0)) continue;
        const double te = bisect(ahead, t0, t1);
        const Point p = position(r, te);
        const double s = dot(p, dir_[e]);
        const double sa = dot(position(loop[j], te), dir_[e]);
        const double sb = dot(position(loop[jn], te), dir_[e]);
        if (s >= sa - tol_pos_ && s <= sb + tol_pos_) consider(te);
      }
    }
    return best;
  }

  std::size_t node_at(Point p, double t) {
    for (std::size_t i = poly_.size(); i < out_.nodes.size(); ++i) {
      const OracleNode& n = out_.nodes[i];
      if (std::abs(n.time - t) <= tol_time_ && distance(n.position, p) <= tol_pos_) return i;
    }
    out_.nodes.push_back({p, t, false});
    return out_.nodes.size() - 1;
  }

  void arc(std::size_t a, std::size_t b) {
    if (a == kNoNode || b == kNoNode || a == b) return;
    const auto key = std::minmax(a, b);
    if (arcs_.insert(key).second) out_.arcs.push_back(key);
  }

  bool near(Point a, Point b) const { return distance(a, b) <= tol_pos_; }

  // One topology fix on `loop`; returns true if something changed. New loops
  // produced by a split are appended to `spawned`.
  bool fix_once(Loop& loop, double t, std::vector<Loop>& spawned, bool& drop) {
    const std::size_t m = loop.size();
    std::vector<Point> p(m);
    for (std::size_t i = 0; i < m; ++i) p[i] = position(loop[i], t);

    // Whole loop at one point.
    if (std::all_of(p.begin(), p.end(), [&](Point q) { return near(q, p[0]); })) {
      Point c;
      for (const Point& q : p) c += q;
      const std::size_t x = node_at(c / static_cast<double>(m), t);
      for (const OracleVertex& v : loop) arc(v.node, x);
      drop = true;
      return true;
    }

    // Consecutive coincident vertices.
    std::size_t start = 0;
    while (near(p[start], p[(start + m - 1) % m])) ++start;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = (start + k) % m;
      std::size_t len = 1;
      while (len < m && near(p[(i + len) % m], p[i])) ++len;
      if (len < 2) continue;
      Point c;
      for (std::size_t q = 0; q < len; ++q) c += p[(i + q) % m];
      c = c / static_cast<double>(len);
      const std::size_t x = node_at(c, t);
      OracleVertex merged{loop[i].in, loop[(i + len - 1) % m].out, x, c, t};
      for (std::size_t q = 0; q < len; ++q) arc(loop[(i + q) % m].node, x);
      Loop next;
      for (std::size_t q = len; q < m; ++q) next.push_back(loop[(i + q) % m]);
      next.push_back(merged);
      loop = std::move(next);
      return true;
    }

    // Vertex resting on the interior of another wavefront edge: mark the contact.
    for (std::size_t i = 0; i < m; ++i) {
      if (!reflex(loop[i])) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t jn = (j + 1) % m;
        if (j == i || jn == i) continue;
        if (near(p[i], p[j]) || near(p[i], p[jn])) continue;
        if (point_to_segment_distance(p[i], {p[j], p[jn]}) > tol_pos_) continue;
        const std::size_t e = loop[j].out;
        loop.insert(loop.begin() + static_cast<std::ptrdiff_t>(jn == 0 ? m : jn),
                    OracleVertex{e, e, kNoNode, p[i], t});
        return true;
      }
    }

    // Two non-adjacent vertices at one point: pinch the loop in two.
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 2; j < m; ++j) {
        if (i == 0 && j == m - 1) continue;
        if (!near(p[i], p[j])) continue;
        const OracleVertex& a = loop[i];
        const OracleVertex& b = loop[j];
        const Point c = midpoint(p[i], p[j]);
        const std::size_t x = node_at(c, t);
        arc(a.node, x);
        arc(b.node, x);
        Loop inner{{b.in, a.out, x, c, t}};
        for (std::size_t q = i + 1; q < j; ++q) inner.push_back(loop[q]);
        Loop outer{{a.in, b.out, x, c, t}};
        for (std::size_t q = j + 1; q < m + i; ++q) outer.push_back(loop[q % m]);
        ++out_.split_events;
        loop = std::move(inner);
        spawned.push_back(std::move(outer));
        return true;
      }
    }

    // Flat (width below the position tolerance): link the remaining traces.
    double area2 = 0.0;
    double length = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      area2 += cross(p[i], p[(i + 1) % m]);
      length += distance(p[i], p[(i + 1) % m]);
    }
    if (m < 3 || std::abs(area2) <= tol_pos_ * length) {
      std::vector<std::size_t> ends;
      for (std::size_t i = 0; i < m; ++i) {
        const OracleVertex& v = loop[i];
        std::size_t x = v.node;
        if (x == kNoNode || !near(out_.nodes[x].position, p[i])) x = node_at(p[i], t);
        arc(v.node, x);
        ends.push_back(x);
      }
      for (std::size_t i = 0; i < m; ++i) arc(ends[i], ends[(i + 1) % m]);
      drop = true;
      return true;
    }
    return false;
  }

  void rebuild(double t) {
    std::vector<Loop> work = std::move(loops_);
    loops_.clear();
    std::size_t budget = 100000;
    while (!work.empty()) {
      Loop loop = std::move(work.back());
      work.pop_back();
      bool drop = false;
      bool changed = true;
      while (changed && !drop) {
        if (--budget == 0) throw Error(ErrorCode::OracleResolution, "rebuild did not settle");
        std::vector<Loop> spawned;
        changed = fix_once(loop, t, spawned, drop);
        for (auto& s : spawned) work.push_back(std::move(s));
      }
      if (!drop) loops_.push_back(std::move(loop));
    }
  }

  const SimplePolygon& poly_;
  double dt_;
  double tol_pos_ = 0.0;
  double tol_time_ = 0.0;
  double horizon_ = 0.0;
  std::vector<Vec2> dir_;
  std::vector<Vec2> nrm_;
  std::vector<double> off_;
  std::vector<Loop> loops_;
  std::set<std::pair<std::size_t, std::size_t>> arcs_;
  OracleSkeleton out_;
};

}  // namespace

OracleSkeleton wavefront_oracle(const SimplePolygon& poly, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  return Stepper(poly, dt).run();
}

}  // namespace skelforge::fixtures
