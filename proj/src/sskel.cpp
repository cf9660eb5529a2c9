#include "skelforge/sskel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include "skelforge/error.hpp"

namespace skelforge {

std::size_t StraightSkeleton::count(SSVertexKind k) const {
  return static_cast<std::size_t>(
      std::count_if(vertices.begin(), vertices.end(), [k](const SSVertex& v) { return v.kind == k; }));
}

std::size_t StraightSkeleton::count(SSEdgeKind k) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [k](const SSEdge& e) { return e.kind == k; }));
}

std::size_t StraightSkeleton::count(WavefrontEventKind k) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [k](const WavefrontEvent& e) { return e.kind == k; }));
}

std::vector<Segment> StraightSkeleton::wavefront_at(double t) const {
  std::vector<Segment> out;
  for (const WavefrontLink& l : links) {
    const WavefrontTrace& a = traces[l.a];
    const WavefrontTrace& b = traces[l.b];
    if (l.since > t || a.birth > t || b.birth > t || a.death <= t || b.death <= t) continue;
    out.push_back({a.at(t), b.at(t)});
  }
  return out;
}

Ray bisector(const Segment& prev_edge, const Segment& next_edge, Point at) {
  const Vec2 n1 = perp_left(normalized(prev_edge.direction()));
  const Vec2 n2 = perp_left(normalized(next_edge.direction()));
  const double c = 1.0 + dot(n1, n2);
  if (c <= kEpsGeom) throw Error(ErrorCode::DegenerateAngle, "anti-parallel edges at vertex");
  return Ray::make(at, (n1 + n2) / c);
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct SplitCandidate {
  double time;
  std::size_t edge;
};

struct ActiveVertex {
  Point origin;
  double birth = 0.0;
  Vec2 velocity;
  bool degenerate = false;
  bool reflex = false;
  bool alive = true;
  std::size_t edge_in = 0;   // polygon edge arriving at this vertex
  std::size_t edge_out = 0;  // polygon edge leaving it
  std::size_t node = 0;      // skeleton node where the vertex was born
  std::size_t prev = kNone;
  std::size_t next = kNone;
  std::vector<SplitCandidate> candidates;
  std::size_t next_candidate = 0;

  Point at(double t) const { return degenerate ? origin : origin + velocity * (t - birth); }
};

struct QueuedEvent {
  double time;
  WavefrontEventKind kind;
  Point point;
  std::uint64_t seq;
  std::size_t a;  // edge event: left vertex;  split: reflex vertex
  std::size_t b;  // edge event: right vertex; split: polygon edge
  std::size_t candidate = 0;
};

struct LaterFirst {
  bool operator()(const QueuedEvent& l, const QueuedEvent& r) const {
    if (l.time != r.time) return l.time > r.time;
    if (l.kind != r.kind) return l.kind > r.kind;
    if (l.point.x != r.point.x) return l.point.x > r.point.x;
    if (l.point.y != r.point.y) return l.point.y > r.point.y;
    return l.seq > r.seq;
  }
};

// Group of wavefront elements meeting at an event point, in loop order.
struct MeetGroup {
  std::size_t edge_in;
  std::size_t edge_out;
};

class Propagator {
 public:
  explicit Propagator(const SimplePolygon& poly) : poly_(poly) {
    const std::size_t n = poly.size();
    const double diam = poly.diameter();
    eps_time_ = 1e-9 * diam;
    eps_pos_ = 1e-9 * diam;
    eps_area_ = 1e-8 * diam * diam;

    dir_.resize(n);
    normal_.resize(n);
    offset_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      dir_[i] = normalized(poly.edge(i).direction());
      normal_[i] = perp_left(dir_[i]);
      offset_[i] = dot(normal_[i], poly.vertex(i));
    }

    out_.source = poly;
    for (std::size_t i = 0; i < n; ++i) {
      out_.vertices.push_back({poly.vertex(i), 0.0, SSVertexKind::Border, {(i + n - 1) % n, i}});
    }
    for (std::size_t i = 0; i < n; ++i) out_.edges.push_back({i, (i + 1) % n, SSEdgeKind::Border});
  }

  StraightSkeleton run() {
    const std::size_t n = poly_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v = make_vertex(poly_.vertex(i), 0.0, (i + n - 1) % n, i, i);
      if (vertices_[v].degenerate) throw Error(ErrorCode::DegenerateAngle, "polygon has a zero-angle spike");
    }
    for (std::size_t i = 0; i < n; ++i) {
      vertices_[i].prev = (i + n - 1) % n;
      vertices_[i].next = (i + 1) % n;
      add_link(i, (i + 1) % n, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) schedule_edge_event(i, (i + 1) % n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (vertices_[i].reflex) build_split_candidates(i, 0.0);
    }

    const std::size_t budget = 64 * (n + 4) * (n + 4);
    std::size_t processed = 0;
    while (!queue_.empty()) {
      const double t0 = queue_.top().time;
      std::vector<QueuedEvent> batch;
      while (!queue_.empty() && queue_.top().time <= t0 + eps_time_) {
        batch.push_back(queue_.top());
        queue_.pop();
      }
      std::sort(batch.begin(), batch.end(), [](const QueuedEvent& l, const QueuedEvent& r) {
        if (l.kind != r.kind) return l.kind < r.kind;
        if (l.point.x != r.point.x) return l.point.x < r.point.x;
        if (l.point.y != r.point.y) return l.point.y < r.point.y;
        return l.seq < r.seq;
      });
      for (const QueuedEvent& ev : batch) {
        if (++processed > budget) throw Error(ErrorCode::NumericalCollapse, "wavefront propagation did not converge");
        if (ev.kind == WavefrontEventKind::Edge) {
          handle_edge_event(ev);
        } else {
          handle_split_event(ev);
        }
      }
      last_time_ = std::max(last_time_, t0);
      collapse_flat_loops(last_time_, /*only_degenerate=*/true);
    }
    collapse_flat_loops(last_time_, /*only_degenerate=*/false);
    for (const ActiveVertex& v : vertices_) {
      if (v.alive) throw Error(ErrorCode::NumericalCollapse, "wavefront left unresolved vertices");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) out_.traces[i].death = death_[i];
    return std::move(out_);
  }

 private:
  std::size_t make_vertex(Point at, double t, std::size_t edge_in, std::size_t edge_out, std::size_t node) {
    ActiveVertex v;
    v.origin = at;
    v.birth = t;
    v.edge_in = edge_in;
    v.edge_out = edge_out;
    v.node = node;
    const Vec2 nl = normal_[edge_in];
    const Vec2 nr = normal_[edge_out];
    const double c = 1.0 + dot(nl, nr);
    if (c <= 1e-12) {
      v.degenerate = true;
    } else {
      v.velocity = (nl + nr) / c;
    }
    v.reflex = cross(dir_[edge_in], dir_[edge_out]) < -1e-12;
    vertices_.push_back(std::move(v));
    fresh_.push_back(vertices_.size() - 1);
    death_.push_back(std::numeric_limits<double>::infinity());
    out_.traces.push_back({at, vertices_.back().velocity, t, std::numeric_limits<double>::infinity(),
                           vertices_.back().degenerate});
    return vertices_.size() - 1;
  }

  void add_link(std::size_t a, std::size_t b, double t) { out_.links.push_back({a, b, t}); }

  void kill(std::size_t v, double t) {
    vertices_[v].alive = false;
    death_[v] = t;
  }

  void push(QueuedEvent ev) {
    ev.seq = seq_++;
    queue_.push(ev);
  }

  void schedule_edge_event(std::size_t u, std::size_t v, double now) {
    const ActiveVertex& a = vertices_[u];
    const ActiveVertex& b = vertices_[v];
    if (a.degenerate || b.degenerate || u == v) return;
    const Vec2 d = dir_[a.edge_out];
    const double rate = dot(b.velocity - a.velocity, d);
    const double len_now = dot(b.at(now) - a.at(now), d);
    double t;
    if (len_now <= eps_pos_) {
      t = now;
    } else if (rate < -1e-14) {
      t = now - len_now / rate;
    } else {
      return;
    }
    push({t, WavefrontEventKind::Edge, midpoint(a.at(t), b.at(t)), 0, u, v});
  }

  void build_split_candidates(std::size_t r, double now) {
    ActiveVertex& v = vertices_[r];
    std::set<std::size_t> edges;
    for (std::size_t w = v.next; w != r; w = vertices_[w].next) edges.insert(vertices_[w].edge_out);
    edges.erase(v.edge_in);
    edges.erase(v.edge_out);
    const Point p = v.at(now);
    for (std::size_t e : edges) {
      const double ahead = dot(normal_[e], p) - offset_[e] - now;
      const double closing = 1.0 - dot(normal_[e], v.velocity);
      if (closing <= 1e-12 || ahead < -eps_pos_) continue;
      v.candidates.push_back({now + std::max(ahead, 0.0) / closing, e});
    }
    std::sort(v.candidates.begin(), v.candidates.end(), [](const SplitCandidate& l, const SplitCandidate& r) {
      return l.time != r.time ? l.time < r.time : l.edge < r.edge;
    });
    v.next_candidate = 0;
    push_next_candidate(r, now);
  }

  void push_next_candidate(std::size_t r, double now) {
    ActiveVertex& v = vertices_[r];
    while (v.next_candidate < v.candidates.size()) {
      const SplitCandidate c = v.candidates[v.next_candidate];
      if (c.time >= now - eps_time_) {
        push({c.time, WavefrontEventKind::Split, v.at(c.time), 0, r, c.edge, v.next_candidate});
        return;
      }
      ++v.next_candidate;
    }
  }

  std::vector<std::size_t> loop_of(std::size_t start) const {
    std::vector<std::size_t> loop{start};
    for (std::size_t w = vertices_[start].next; w != start; w = vertices_[w].next) {
      loop.push_back(w);
      if (loop.size() > vertices_.size()) throw Error(ErrorCode::NumericalCollapse, "corrupt wavefront loop");
    }
    return loop;
  }

  // Projection of x along edge e lies within the wavefront piece a->b.
  bool within_piece(Point x, std::size_t a, std::size_t b, std::size_t e, double t) const {
    const Vec2 d = dir_[e];
    const double s = dot(x, d);
    const double sa = dot(vertices_[a].at(t), d);
    const double sb = dot(vertices_[b].at(t), d);
    return s >= sa - eps_pos_ && s <= sb + eps_pos_;
  }

  void handle_edge_event(const QueuedEvent& ev) {
    const ActiveVertex& a = vertices_[ev.a];
    if (!a.alive || !vertices_[ev.b].alive || a.next != ev.b) return;
    resolve(ev.time, ev.point, ev.a, {ev.a, ev.b}, WavefrontEventKind::Edge);
  }

  void handle_split_event(const QueuedEvent& ev) {
    ActiveVertex& r = vertices_[ev.a];
    if (!r.alive || r.next_candidate != ev.candidate) return;
    const std::size_t e = ev.b;
    for (std::size_t a = r.next; a != ev.a; a = vertices_[a].next) {
      const std::size_t b = vertices_[a].next;
      if (vertices_[a].edge_out != e || b == ev.a) continue;
      if (within_piece(ev.point, a, b, e, ev.time)) {
        resolve(ev.time, ev.point, ev.a, {ev.a}, WavefrontEventKind::Split);
        return;
      }
    }
    ++r.next_candidate;
    push_next_candidate(ev.a, ev.time);
  }

  std::size_t node_at(Point x, double t, const std::vector<std::size_t>& members) {
    for (std::size_t m : members) {
      const SSVertex& node = out_.vertices[vertices_[m].node];
      if (node.kind == SSVertexKind::Skeleton && distance(node.position, x) <= eps_pos_ &&
          std::abs(node.time - t) <= eps_time_) {
        return vertices_[m].node;
      }
    }
    out_.vertices.push_back({x, t, SSVertexKind::Skeleton, {}});
    return out_.vertices.size() - 1;
  }

  void add_defining(std::size_t node, std::size_t edge) {
    auto& list = out_.vertices[node].defining_edges;
    if (std::find(list.begin(), list.end(), edge) == list.end()) {
      list.insert(std::upper_bound(list.begin(), list.end(), edge), edge);
    }
  }

  void add_arc(std::size_t from, std::size_t to) {
    if (from == to) return;
    const auto key = std::minmax(from, to);
    if (!arcs_.insert(key).second) return;
    const bool border = out_.vertices[from].kind == SSVertexKind::Border ||
                        out_.vertices[to].kind == SSVertexKind::Border;
    out_.edges.push_back({from, to, border ? SSEdgeKind::Peripheral : SSEdgeKind::Skeleton});
  }

  // Connects the trace of `v` to `target`, through the point it reached at t.
  void finish_vertex(std::size_t v, std::size_t target, double t) {
    const ActiveVertex& av = vertices_[v];
    const Point here = av.at(t);
    const SSVertex& origin = out_.vertices[av.node];
    std::size_t via = av.node;
    if (distance(here, origin.position) > eps_pos_ && distance(here, out_.vertices[target].position) > eps_pos_) {
      out_.vertices.push_back({here, t, SSVertexKind::Skeleton, {av.edge_in, av.edge_out}});
      via = out_.vertices.size() - 1;
      add_arc(av.node, via);
    }
    add_arc(via, target);
    add_defining(target, av.edge_in);
    add_defining(target, av.edge_out);
    kill(v, t);
  }

  void resolve(double t, Point x, std::size_t anchor, const std::vector<std::size_t>& forced,
               WavefrontEventKind kind) {
    const std::vector<std::size_t> loop = loop_of(anchor);
    const std::size_t m = loop.size();
    std::vector<char> in_s(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t v = loop[i];
      if (std::find(forced.begin(), forced.end(), v) != forced.end() ||
          distance(vertices_[v].at(t), x) <= eps_pos_) {
        in_s[i] = 1;
      }
    }
    // Pieces passing through x whose endpoints are elsewhere (split targets).
    std::vector<char> piece_hit(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = (i + 1) % m;
      if (in_s[i] || in_s[j]) continue;
      const Segment piece{vertices_[loop[i]].at(t), vertices_[loop[j]].at(t)};
      if (point_to_segment_distance(x, piece) <= eps_pos_) piece_hit[i] = 1;
    }

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < m; ++i) {
      if (in_s[i]) members.push_back(loop[i]);
    }
    const std::size_t node = node_at(x, t, members);
    out_.events.push_back({kind, t, x, node});

    if (members.size() == m) {
      for (std::size_t v : members) finish_vertex(v, node, t);
      return;
    }

    // Token walk in loop order: S-runs and hit pieces are groups, the rest are chains.
    struct Token {
      bool group;
      MeetGroup meet;
      std::size_t vertex;
    };
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < m; ++i) {
      const ActiveVertex& v = vertices_[loop[i]];
      if (in_s[i]) {
        if (!tokens.empty() && tokens.back().group && tokens.back().vertex != kNone) {
          tokens.back().meet.edge_out = v.edge_out;
        } else {
          tokens.push_back({true, {v.edge_in, v.edge_out}, loop[i]});
        }
      } else {
        tokens.push_back({false, {}, loop[i]});
      }
      if (piece_hit[i]) {
        const std::size_t e = v.edge_out;
        tokens.push_back({true, {e, e}, kNone});
        add_defining(node, e);
      }
    }
    // Merge a leading S-run into a trailing one across the wrap-around.
    if (tokens.size() > 1 && tokens.front().group && tokens.back().group && tokens.front().vertex != kNone &&
        tokens.back().vertex != kNone) {
      tokens.back().meet.edge_out = tokens.front().meet.edge_out;
      tokens.erase(tokens.begin());
    }
    // Rotate so the walk starts at a group.
    const auto first_group = std::find_if(tokens.begin(), tokens.end(), [](const Token& tk) { return tk.group; });
    std::rotate(tokens.begin(), first_group, tokens.end());

    std::vector<std::pair<MeetGroup, std::vector<std::size_t>>> groups;
    for (const Token& tk : tokens) {
      if (tk.group) {
        groups.push_back({tk.meet, {}});
      } else {
        groups.back().second.push_back(tk.vertex);
      }
    }

    for (std::size_t v : members) finish_vertex(v, node, t);

    for (std::size_t g = 0; g < groups.size(); ++g) {
      const MeetGroup& here = groups[g].first;
      const MeetGroup& after = groups[(g + 1) % groups.size()].first;
      const std::vector<std::size_t>& chain = groups[g].second;
      if (chain.empty()) continue;
      if (chain.size() == 1) {
        finish_vertex(chain.front(), node, t);
        continue;
      }
      const std::size_t nv = make_vertex(x, t, after.edge_in, here.edge_out, node);
      ActiveVertex& created = vertices_[nv];
      created.next = chain.front();
      created.prev = chain.back();
      vertices_[chain.front()].prev = nv;
      vertices_[chain.back()].next = nv;
      add_link(chain.back(), nv, t);
      add_link(nv, chain.front(), t);
      schedule_edge_event(chain.back(), nv, t);
      schedule_edge_event(nv, chain.front(), t);
      if (vertices_[nv].reflex && !vertices_[nv].degenerate) build_split_candidates(nv, t);
    }
  }

  // Loops with zero area (or fewer than three vertices) cannot propagate any
  // further; connect their remaining vertices along the loop.
  void collapse_flat_loops(double t, bool only_degenerate) {
    // Per batch only loops holding a vertex created since the last pass can
    // have changed; the final pass looks at everything.
    std::vector<std::size_t> starts;
    if (only_degenerate) {
      starts.swap(fresh_);
    } else {
      starts.resize(vertices_.size());
      for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = i;
    }
    std::vector<char> seen(vertices_.size(), 0);
    for (std::size_t start : starts) {
      if (!vertices_[start].alive || seen[start]) continue;
      const std::vector<std::size_t> loop = loop_of(start);
      bool has_degenerate = false;
      std::vector<Point> ring;
      for (std::size_t v : loop) {
        seen[v] = 1;
        has_degenerate = has_degenerate || vertices_[v].degenerate;
        ring.push_back(vertices_[v].at(t));
      }
      if (only_degenerate && !has_degenerate && loop.size() > 2) continue;
      if (loop.size() > 2 && std::abs(signed_area(ring)) > eps_area_) {
        if (only_degenerate) continue;
        throw Error(ErrorCode::NumericalCollapse, "wavefront loop stalled with positive area");
      }
      std::vector<std::size_t> cluster_node(loop.size(), kNone);
      for (std::size_t i = 0; i < loop.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (distance(ring[i], ring[j]) <= eps_pos_) {
            cluster_node[i] = cluster_node[j];
            break;
          }
        }
        if (cluster_node[i] == kNone) {
          std::vector<std::size_t> members;
          for (std::size_t j = i; j < loop.size(); ++j) {
            if (distance(ring[i], ring[j]) <= eps_pos_) members.push_back(loop[j]);
          }
          cluster_node[i] = node_at(ring[i], t, members);
        }
      }
      for (std::size_t i = 0; i < loop.size(); ++i) finish_vertex(loop[i], cluster_node[i], t);
      for (std::size_t i = 0; i < loop.size(); ++i) add_arc(cluster_node[i], cluster_node[(i + 1) % loop.size()]);
    }
  }

  const SimplePolygon& poly_;
  double eps_time_ = 0.0;
  double eps_pos_ = 0.0;
  double eps_area_ = 0.0;
  double last_time_ = 0.0;
  std::vector<Vec2> dir_;
  std::vector<Vec2> normal_;
  std::vector<double> offset_;
  std::vector<ActiveVertex> vertices_;
  std::vector<double> death_;
  std::vector<std::size_t> fresh_;
  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, LaterFirst> queue_;
  std::uint64_t seq_ = 0;
  std::set<std::pair<std::size_t, std::size_t>> arcs_;
  StraightSkeleton out_;
};

}  // namespace

StraightSkeleton extract_straight_skeleton(const SimplePolygon& poly) {
  if (poly.size() < 3) throw Error(ErrorCode::InvalidArgument, "polygon needs at least 3 vertices");
  return Propagator(poly).run();
}

std::string straight_skeleton_svg(const StraightSkeleton& ss, std::span<const double> times) {
  const auto verts = ss.source.vertices();
  const BoundingBox box = bounding_box(verts);
  const double pad = 0.05 * std::max(box.diagonal(), 1.0);
  std::ostringstream svg;
  svg.precision(10);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << box.min.x - pad << ' ' << -(box.max.y + pad)
      << ' ' << (box.max.x - box.min.x) + 2 * pad << ' ' << (box.max.y - box.min.y) + 2 * pad << "\">\n";
  svg << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << pad * 0.05 << "\">\n";
  svg << "<polygon stroke=\"black\" points=\"";
  for (const Point& p : verts) svg << p.x << ',' << p.y << ' ';
  svg << "\"/>\n";
  for (double t : times) {
    for (const Segment& s : ss.wavefront_at(t)) {
      svg << "<line stroke=\"green\" x1=\"" << s.a.x << "\" y1=\"" << s.a.y << "\" x2=\"" << s.b.x << "\" y2=\""
          << s.b.y << "\"/>\n";
    }
  }
  for (const SSEdge& e : ss.edges) {
    if (e.kind == SSEdgeKind::Border) continue;
    const Point a = ss.vertices[e.from].position;
    const Point b = ss.vertices[e.to].position;
    svg << "<line stroke=\"" << (e.kind == SSEdgeKind::Skeleton ? "red" : "lightcoral") << "\" x1=\"" << a.x
        << "\" y1=\"" << a.y << "\" x2=\"" << b.x << "\" y2=\"" << b.y << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace skelforge
