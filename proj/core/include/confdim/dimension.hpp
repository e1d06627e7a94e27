#pragma once

// Empirical measure-dimension estimators: correlation integrals, logarithmic
// density fields, Young's criterion, density quantile bounds and the flatness
// detector for the modified correlation dimension.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "confdim/interval.hpp"
#include "confdim/line_measure.hpp"
#include "confdim/measures.hpp"

namespace confdim {

// C(r) = (1/N^2) #{(i, j) : |x_i - x_j| <= r}, diagonal included.
double correlation_integral(const std::vector<double>& points, double r);

struct RadiusGrid {
  double r_min = 1e-3;
  double r_max = 1e-1;
  std::size_t count = 20;
};

struct CorrelationCurve {
  std::vector<double> radii;
  std::vector<double> values;
  Interval fit_window;
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::size_t fit_points = 0;
  bool degenerate = false;  // all points equal
};

// Geometric radii; the default fit window drops half a decade at each end
// (or uses the whole grid when that leaves fewer than three radii).
CorrelationCurve correlation_curve(const SampleCloud& cloud, const RadiusGrid& grid,
                                   std::optional<Interval> fit_window = std::nullopt);

// Mass bracket of the closed ball B(x, r).
using BallMass = std::function<Interval(double x, double r)>;

BallMass ball_mass(const LineMeasure& measure);
// Cylinder cover of the ball; cylinders straddling the boundary go to the
// upper bound only.
BallMass ball_mass(const CylinderMeasure& measure, double resolution = 1e-12);

// r_max, r_max/2, ... down to r_min.
std::vector<double> dyadic_radii(double r_min, double r_max);

struct DensityField {
  std::vector<double> points;
  std::vector<double> lower;  // min over radii of log m(B(x,r)) / log r
  std::vector<double> upper;  // max over radii
  std::vector<bool> in_support;
  Interval radii_range;
  std::size_t radii_count = 0;

  std::size_t supported() const;
};

DensityField density_field(const BallMass& mass, const SampleCloud& cloud, const std::vector<double>& radii);

struct YoungResult {
  double c = 0.0;         // median of per-point midpoints
  double fraction = 0.0;  // share of points with [lower, upper] inside c +- band
};

YoungResult young_criterion(const DensityField& field, double band);

struct DensityBounds {
  double gamma_lower = 0.0;
  double gamma_upper = 0.0;
  double quantile = 0.05;
};

DensityBounds eq15_bounds(const DensityField& field, double q = 0.05);

struct FlatnessCurve {
  std::vector<double> radii;
  std::vector<double> exponents;  // e(r) = log(bound) / log r
  std::vector<double> bounds;     // max_s inf_{x in [0,s]} m(B(x,r)) m([0,s])
  std::vector<double> best_s;
  bool fires = false;
};

// Candidate set [0, s] for every s in `candidates`; when empty, 0, 1, the
// radii and the measure's breakpoints in (0, 1] are used.
FlatnessCurve flatness_detector(const LineMeasure& measure, const std::vector<double>& radii,
                                std::vector<double> candidates = {}, double fire_threshold = 0.25);

// inf over x in [0, s] of m(B(x, r)) with open balls.
double min_ball_mass(const LineMeasure& measure, double s, double r);

}  // namespace confdim
