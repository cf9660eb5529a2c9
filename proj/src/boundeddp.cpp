#include "skelforge/boundeddp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "skelforge/error.hpp"

namespace skelforge {

namespace {
constexpr int kTableSteps = 32;
constexpr std::size_t kMaxSamples = 1024;
}  // namespace

BranchCurve::BranchCurve(std::vector<Point> knots) {
  for (const Point& p : knots) {
    if (knots_.empty() || distance(knots_.back(), p) > kEpsGeom) knots_.push_back(p);
  }
  if (knots_.size() < 2) return;
  if (!knots.empty()) knots_.back() = knots.back();

  const std::size_t n = knots_.size();
  ctrl_.reserve(n + 2);
  ctrl_.push_back(knots_[0] * 2.0 - knots_[1]);
  ctrl_.insert(ctrl_.end(), knots_.begin(), knots_.end());
  ctrl_.push_back(knots_[n - 1] * 2.0 - knots_[n - 2]);
  tk_.assign(ctrl_.size(), 0.0);
  for (std::size_t i = 1; i < ctrl_.size(); ++i) tk_[i] = tk_[i - 1] + std::sqrt(distance(ctrl_[i - 1], ctrl_[i]));

  double s = 0.0;
  for (std::size_t seg = 0; seg + 1 < n; ++seg) {
    Point prev = knots_[seg];
    table_.push_back({seg, 0.0, s});
    for (int k = 1; k <= kTableSteps; ++k) {
      const double u = static_cast<double>(k) / kTableSteps;
      const Point p = eval(seg, u);
      s += distance(prev, p);
      prev = p;
      table_.push_back({seg, u, s});
    }
  }
  total_ = s;
}

Point BranchCurve::eval(std::size_t seg, double u) const {
  const Point& p0 = ctrl_[seg];
  const Point& p1 = ctrl_[seg + 1];
  const Point& p2 = ctrl_[seg + 2];
  const Point& p3 = ctrl_[seg + 3];
  const double t0 = tk_[seg], t1 = tk_[seg + 1], t2 = tk_[seg + 2], t3 = tk_[seg + 3];
  if (u <= 0.0) return p1;
  if (u >= 1.0) return p2;
  const double t = t1 + u * (t2 - t1);
  const Point a1 = p0 * ((t1 - t) / (t1 - t0)) + p1 * ((t - t0) / (t1 - t0));
  const Point a2 = p1 * ((t2 - t) / (t2 - t1)) + p2 * ((t - t1) / (t2 - t1));
  const Point a3 = p2 * ((t3 - t) / (t3 - t2)) + p3 * ((t - t2) / (t3 - t2));
  const Point b1 = a1 * ((t2 - t) / (t2 - t0)) + a2 * ((t - t0) / (t2 - t0));
  const Point b2 = a2 * ((t3 - t) / (t3 - t1)) + a3 * ((t - t1) / (t3 - t1));
  return b1 * ((t2 - t) / (t2 - t1)) + b2 * ((t - t1) / (t2 - t1));
}

std::pair<std::size_t, double> BranchCurve::locate(double s) const {
  if (table_.empty()) return {0, 0.0};
  if (s <= 0.0) return {0, 0.0};
  if (s >= total_) return {table_.back().seg, 1.0};
  auto it = std::upper_bound(table_.begin(), table_.end(), s,
                             [](double v, const TableRow& r) { return v < r.s; });
  const TableRow& hi = *it;
  const TableRow& lo = *std::prev(it);
  if (lo.seg != hi.seg) return {hi.seg, 0.0};
  const double f = hi.s > lo.s ? (s - lo.s) / (hi.s - lo.s) : 0.0;
  return {lo.seg, lo.u + f * (hi.u - lo.u)};
}

Point BranchCurve::at(double s) const {
  if (knots_.empty()) return {};
  if (knots_.size() < 2) return knots_.front();
  const auto [seg, u] = locate(s);
  return eval(seg, u);
}

Vec2 BranchCurve::tangent(double s) const {
  if (knots_.size() < 2) return {1.0, 0.0};
  const auto [seg, u] = locate(s);
  const double h = 1e-4;
  const Vec2 d = eval(seg, std::min(u + h, 1.0)) - eval(seg, std::max(u - h, 0.0));
  if (norm(d) > 1e-12) return normalized(d);
  return normalized(knots_[seg + 1] - knots_[seg]);
}

BranchCurve fit_branch_spline(const Skeleton& skel, const Branch& branch) {
  std::vector<Point> pts;
  for (JointId id : branch.joints) pts.push_back(skel.joint(id).position);
  return BranchCurve(std::move(pts));
}

AxisSamples sample_axis(const BranchCurve& curve, std::size_t n_samples) {
  n_samples = std::max<std::size_t>(n_samples, 2);
  AxisSamples out;
  const double len = curve.length();
  out.spacing = len / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double s = len * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    out.points.push_back(curve.at(s));
    out.tangents.push_back(curve.tangent(s));
  }
  if (!curve.knots().empty()) {
    out.points.front() = curve.knots().front();
    out.points.back() = curve.knots().back();
  }
  return out;
}

double GeneralCylinder::mean_slice_length() const {
  if (size() == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i) acc += distance(slices.left[i], slices.right[i]);
  return acc / static_cast<double>(size());
}

namespace {

// Nearest boundary hits along +dir and -dir from p, in one pass over the edges.
std::pair<std::optional<double>, std::optional<double>> nearest_hits(Point p, Vec2 dir, const SimplePolygon& poly) {
  std::optional<double> up, down;
  const auto v = poly.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i];
    const Vec2 e = v[i + 1 == n ? 0 : i + 1] - a;
    const double denom = cross(dir, e);
    if (denom * denom <= 1e-30 * dot(e, e)) continue;  // parallel
    const Vec2 w = a - p;
    const double u = cross(w, dir) / denom;
    if (u < -1e-12 || u > 1.0 + 1e-12) continue;
    const double t = cross(w, e) / denom;
    if (t >= 0.0 && (!up || t < *up)) up = t;
    if (t <= 0.0 && (!down || -t < *down)) down = -t;
  }
  return {up, down};
}

}  // namespace

SliceSet slice_polygon(const AxisSamples& axis, const SimplePolygon& poly) {
  SliceSet out;
  for (std::size_t i = 0; i < axis.points.size(); ++i) {
    const Point p = axis.points[i];
    const Vec2 nrm = perp_left(axis.tangents[i]);
    const auto [up, down] = nearest_hits(p, nrm, poly);
    if (!up || !down) throw Error(ErrorCode::DegenerateSlice, "slice misses the polygon boundary");
    out.left.push_back(p + nrm * *up);
    out.right.push_back(p - nrm * *down);
  }
  return out;
}

GeneralCylinder make_general_cylinder(AxisSamples axis, SliceSet slices) {
  GeneralCylinder gc{std::move(axis), std::move(slices), {}};
  auto push = [&gc](Point p) {
    if (gc.omega.empty() || distance(gc.omega.back(), p) > kEpsGeom) gc.omega.push_back(p);
  };
  for (const Point& p : gc.slices.right) push(p);
  for (auto it = gc.slices.left.rbegin(); it != gc.slices.left.rend(); ++it) push(*it);
  while (gc.omega.size() > 1 && distance(gc.omega.back(), gc.omega.front()) <= kEpsGeom) gc.omega.pop_back();
  return gc;
}

GeneralCylinder build_general_cylinder(const BranchCurve& curve, const SimplePolygon& poly, std::size_t n_samples) {
  AxisSamples axis = sample_axis(curve, n_samples);
  SliceSet slices = slice_polygon(axis, poly);
  return make_general_cylinder(std::move(axis), std::move(slices));
}

double point_selection_error(std::size_t i, std::size_t i_st, std::size_t i_en, const GeneralCylinder& gc,
                             double alpha_s) {
  const auto& p = gc.axis.points;
  const double axis_term = point_to_line_distance(p[i], {p[i_st], p[i_en]});
  if (alpha_s == 0.0) return axis_term;
  // Straightened frame: slices stand upright at uniform abscissae, so the
  // trapezoid sides interpolate the end widths linearly.
  const double lambda = static_cast<double>(i - i_st) / static_cast<double>(i_en - i_st);
  const double up = gc.width_left(i_st) + lambda * (gc.width_left(i_en) - gc.width_left(i_st));
  const double down = gc.width_right(i_st) + lambda * (gc.width_right(i_en) - gc.width_right(i_st));
  const double shape_term = std::abs(gc.width_left(i) - up) + std::abs(gc.width_right(i) - down);
  return axis_term + alpha_s * shape_term;
}

std::vector<bool> bounded_dp_select(const GeneralCylinder& gc, std::size_t i_st, std::size_t i_en, double eps,
                                    double alpha_s) {
  std::vector<bool> keep(gc.size(), false);
  if (i_st >= gc.size() || i_en >= gc.size() || i_st > i_en) {
    throw Error(ErrorCode::InvalidArgument, "selection range out of bounds");
  }
  keep[i_st] = keep[i_en] = true;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{i_st, i_en}};
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi <= lo + 1) continue;
    double best = -1.0;
    std::size_t arg = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double e = point_selection_error(i, lo, hi, gc, alpha_s);
      if (e > best) {
        best = e;
        arg = i;
      }
    }
    if (best > eps) {
      keep[arg] = true;
      stack.emplace_back(lo, arg);
      stack.emplace_back(arg, hi);
    }
  }
  return keep;
}

bool segment_inside_region(const Segment& s, std::span<const Point> ring, int samples) {
  samples = std::max(samples, 2);
  for (int k = 0; k < samples; ++k) {
    const Point q = lerp(s.a, s.b, static_cast<double>(k) / (samples - 1));
    if (!point_in_polygon(q, ring) && distance_to_ring(q, ring) > kEpsGeom) return false;
  }
  return true;
}

BoundedDPResult bounded_dp_tune(const GeneralCylinder& gc, double eps0, const BoundedDPConfig& cfg,
                                const InsideTest& inside) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be in (0,1)");
  BoundedDPResult out;
  if (gc.size() < 2) return out;
  const InsideTest test = inside ? inside : [&gc](const Segment& s) { return segment_inside_region(s, gc.omega); };
  double eps = eps0;
  for (int it = 0; it < cfg.max_iterations; ++it, eps *= cfg.alpha) {
    out.iterations = it + 1;
    const std::vector<bool> keep = bounded_dp_select(gc, 0, gc.size() - 1, eps, cfg.alpha_s);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) idx.push_back(i);
    }
    bool ok = true;
    for (std::size_t k = 1; k < idx.size() && ok; ++k) {
      ok = test({gc.axis.points[idx[k - 1]], gc.axis.points[idx[k]]});
    }
    if (ok) {
      out.retained = std::move(idx);
      for (std::size_t i : out.retained) out.polyline.push_back(gc.axis.points[i]);
      out.epsilon = eps;
      out.converged = true;
      return out;
    }
  }
  out.epsilon = eps;
  for (std::size_t i = 0; i < gc.size(); ++i) out.retained.push_back(i);
  out.polyline = gc.axis.points;
  return out;
}

bool is_long_branch(const Skeleton& skel, const Branch& branch) {
  if (branch.joints.size() >= 3) return true;
  return branch.joints.size() == 2 && branch_length(skel, branch) >= 4.0 * skel.mean_bone_length();
}

std::optional<BranchSimplification> bounded_dp(const Skeleton& skel, const Branch& branch,
                                               const SimplePolygon& poly, const BoundedDPConfig& cfg,
                                               std::optional<double> eps0) {
  if (!is_long_branch(skel, branch)) return std::nullopt;
  std::vector<Point> pts;
  for (JointId id : branch.joints) pts.push_back(skel.joint(id).position);
  const BranchCurve curve(pts);
  if (curve.length() <= kEpsGeom) return std::nullopt;

  const GeneralCylinder coarse = build_general_cylinder(curve, poly, 16);
  const double mean_slice = coarse.mean_slice_length();
  std::size_t n = 16;
  if (mean_slice > kEpsGeom) {
    const double want = std::ceil(curve.length() / (0.5 * mean_slice));
    n = std::clamp<std::size_t>(static_cast<std::size_t>(want), 16, kMaxSamples);
  }
  BranchSimplification out{n == 16 ? coarse : build_general_cylinder(curve, poly, n), {}};
  const double start = eps0 ? *eps0 : cfg.eps0_factor * bounding_box(pts).diagonal();
  // The spline can bulge past the boundary where the branch turns sharply, so
  // retained samples must also lie inside the shape itself.
  const auto ring = poly.vertices();
  const GeneralCylinder& gc = out.cylinder;
  auto in_shape = [ring](Point p) { return point_in_polygon(p, ring) || distance_to_ring(p, ring) <= kEpsGeom; };
  out.result = bounded_dp_tune(gc, start, cfg, [&](const Segment& s) {
    return segment_inside_region(s, gc.omega) && in_shape(s.a) && in_shape(s.b);
  });
  if (!out.result.converged) out.result.polyline = pts;
  return out;
}

void replace_branch(Skeleton& skel, const Branch& branch, std::span<const Point> polyline) {
  if (branch.joints.size() < 2 || polyline.size() < 2) return;
  const JointId first = branch.joints.front();
  const JointId last = branch.joints.back();
  if (polyline.size() == branch.joints.size()) {
    bool same = true;
    for (std::size_t i = 1; i + 1 < polyline.size() && same; ++i) {
      same = skel.joint(branch.joints[i]).position == polyline[i];
    }
    if (same) return;
  }
  const double r0 = skel.joint(first).radius;
  const double r1 = skel.joint(last).radius;
  const PartId part = skel.joint(first).part;
  for (std::size_t i = 1; i + 1 < branch.joints.size(); ++i) skel.remove_joint(branch.joints[i]);
  skel.disconnect(first, last);

  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) total += distance(polyline[i - 1], polyline[i]);
  JointId prev = first;
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < polyline.size(); ++i) {
    acc += distance(polyline[i - 1], polyline[i]);
    const double f = total > 0.0 ? acc / total : 0.0;
    const JointId id = skel.add_joint(polyline[i], r0 + f * (r1 - r0), part);
    skel.connect(prev, id);
    prev = id;
  }
  skel.connect(prev, last);
}

Skeleton simplify_branches(Skeleton skel, const SimplePolygon& poly, const BoundedDPConfig& cfg,
                           std::optional<double> eps0) {
  for (const Branch& b : branches(skel)) {
    try {
      const auto done = bounded_dp(skel, b, poly, cfg, eps0);
      if (done) replace_branch(skel, b, done->result.polyline);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateSlice) throw;
    }
  }
  return skel;
}

std::string bounded_dp_svg(const GeneralCylinder& gc, const BoundedDPResult& r, const SimplePolygon* poly) {
  std::vector<Point> all = gc.omega;
  if (poly) all.insert(all.end(), poly->vertices().begin(), poly->vertices().end());
  const BoundingBox box = bounding_box(all);
  const double pad = 0.05 * std::max(box.diagonal(), 1.0);
  const double w = pad * 0.05;
  std::ostringstream svg;
  svg.precision(10);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << box.min.x - pad << ' ' << -(box.max.y + pad)
      << ' ' << (box.max.x - box.min.x) + 2 * pad << ' ' << (box.max.y - box.min.y) + 2 * pad << "\">\n";
  svg << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << w << "\">\n";
  auto polyline = [&svg](std::span<const Point> pts, const char* color, bool closed) {
    svg << (closed ? "<polygon" : "<polyline") << " stroke=\"" << color << "\" points=\"";
    for (const Point& p : pts) svg << p.x << ',' << p.y << ' ';
    svg << "\"/>\n";
  };
  if (poly) polyline(poly->vertices(), "black", true);
  polyline(gc.omega, "steelblue", true);
  for (std::size_t i = 0; i < gc.size(); ++i) {
    svg << "<line stroke=\"lightgray\" x1=\"" << gc.slices.left[i].x << "\" y1=\"" << gc.slices.left[i].y
        << "\" x2=\"" << gc.slices.right[i].x << "\" y2=\"" << gc.slices.right[i].y << "\"/>\n";
  }
  polyline(gc.axis.points, "gray", false);
  polyline(r.polyline, "red", false);
  for (const Point& p : r.polyline) {
    svg << "<circle fill=\"red\" cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << w * 3 << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace skelforge
