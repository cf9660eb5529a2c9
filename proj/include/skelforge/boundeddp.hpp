#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skelforge/geom.hpp"
#include "skelforge/skeleton.hpp"
#include "skelforge/stroke.hpp"

namespace skelforge {

// Centripetal Catmull-Rom curve through a polyline, parameterized by arclength.
class BranchCurve {
 public:
  BranchCurve() = default;
  explicit BranchCurve(std::vector<Point> knots);

  double length() const { return total_; }
  Point at(double s) const;
  Vec2 tangent(double s) const;  // unit
  std::span<const Point> knots() const { return knots_; }

 private:
  Point eval(std::size_t seg, double u) const;
  std::pair<std::size_t, double> locate(double s) const;

  std::vector<Point> knots_;
  std::vector<Point> ctrl_;   // knots plus one phantom point on each end
  std::vector<double> tk_;    // centripetal knot parameters for ctrl_
  // Dense arclength table: (segment, u, cumulative length).
  struct TableRow {
    std::size_t seg;
    double u;
    double s;
  };
  std::vector<TableRow> table_;
  double total_ = 0.0;
};

BranchCurve fit_branch_spline(const Skeleton& skel, const Branch& branch);

struct AxisSamples {
  std::vector<Point> points;
  std::vector<Vec2> tangents;
  double spacing = 0.0;
};

AxisSamples sample_axis(const BranchCurve& curve, std::size_t n_samples);

// Slice i runs from left[i] to right[i] through points[i]; left is on the
// counter-clockwise side of the axis direction.
struct SliceSet {
  std::vector<Point> left;
  std::vector<Point> right;
};

struct GeneralCylinder {
  AxisSamples axis;
  SliceSet slices;
  std::vector<Point> omega;  // right chain forward, then left chain backward

  std::size_t size() const { return axis.points.size(); }
  double width_left(std::size_t i) const { return distance(slices.left[i], axis.points[i]); }
  double width_right(std::size_t i) const { return distance(slices.right[i], axis.points[i]); }
  double mean_slice_length() const;
};

// Throws DegenerateSlice when a slice misses the boundary on either side.
SliceSet slice_polygon(const AxisSamples& axis, const SimplePolygon& poly);
GeneralCylinder build_general_cylinder(const BranchCurve& curve, const SimplePolygon& poly, std::size_t n_samples);
// Assembles a cylinder from precomputed samples and slices (tests, fixtures).
GeneralCylinder make_general_cylinder(AxisSamples axis, SliceSet slices);

struct BoundedDPConfig {
  double alpha_s = 1.0;
  double eps0_factor = 0.5;  // eps0 = factor * branch bounding-box diagonal
  double alpha = 0.8;
  int max_iterations = 40;
};

double point_selection_error(std::size_t i, std::size_t i_st, std::size_t i_en, const GeneralCylinder& gc,
                             double alpha_s);

// Retained-sample flags for the range [i_st, i_en]; entries outside the range
// are false.
std::vector<bool> bounded_dp_select(const GeneralCylinder& gc, std::size_t i_st, std::size_t i_en, double eps,
                                    double alpha_s);

// Sampled containment: `samples` evenly spaced points of `s` (endpoints
// included) must be inside or within kEpsGeom of the ring.
bool segment_inside_region(const Segment& s, std::span<const Point> ring, int samples = 64);

using InsideTest = std::function<bool(const Segment&)>;

struct BoundedDPResult {
  std::vector<std::size_t> retained;  // sample indices
  std::vector<Point> polyline;
  double epsilon = 0.0;               // threshold that produced the result
  int iterations = 0;
  bool converged = false;             // false: IterationLimit, polyline is the input
};

// Threshold tuning: shrink eps by alpha until every simplified edge passes
// `inside` (defaults to containment in gc.omega).
BoundedDPResult bounded_dp_tune(const GeneralCylinder& gc, double eps0, const BoundedDPConfig& cfg,
                                const InsideTest& inside = {});

struct BranchSimplification {
  GeneralCylinder cylinder;
  BoundedDPResult result;
};

// Full per-branch pass: spline, slicing, tuning. `eps0` overrides the
// bounding-box based initial threshold. Returns nullopt for branches below the
// length gate.
std::optional<BranchSimplification> bounded_dp(const Skeleton& skel, const Branch& branch,
                                               const SimplePolygon& poly, const BoundedDPConfig& cfg,
                                               std::optional<double> eps0 = std::nullopt);

bool is_long_branch(const Skeleton& skel, const Branch& branch);

// Swaps the interior joints of `branch` for the interior points of `polyline`
// (whose ends must be the branch ends). New joints inherit the part of the
// first branch joint and a linearly interpolated radius.
void replace_branch(Skeleton& skel, const Branch& branch, std::span<const Point> polyline);

// Runs bounded_dp on every long branch of `skel` against `poly`. Branches whose
// slicing fails are left untouched.
Skeleton simplify_branches(Skeleton skel, const SimplePolygon& poly, const BoundedDPConfig& cfg,
                           std::optional<double> eps0 = std::nullopt);

// Axis, slices, region, retained samples.
std::string bounded_dp_svg(const GeneralCylinder& gc, const BoundedDPResult& r, const SimplePolygon* poly = nullptr);

}  // namespace skelforge
