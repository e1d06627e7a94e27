#include "confdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confdim/error.hpp"

namespace confdim {

namespace {

// Ordered pairs (i, j), i != j, with x_j - x_i in [0, r] on sorted data.
std::size_t close_pairs(const std::vector<double>& sorted, double r) {
  std::size_t count = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (j < i + 1) j = i + 1;
    while (j < sorted.size() && sorted[j] - sorted[i] <= r) ++j;
    count += j - i - 1;
  }
  return count;
}

double quantile_of(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  const double f = pos - static_cast<double>(i);
  return v[i] + f * (v[i + 1] - v[i]);
}

}  // namespace

double correlation_integral(const std::vector<double>& points, double r) {
  if (points.empty()) return 0.0;
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  return (n + 2.0 * static_cast<double>(close_pairs(sorted, r))) / (n * n);
}

CorrelationCurve correlation_curve(const SampleCloud& cloud, const RadiusGrid& grid, std::optional<Interval> fit_window) {
  if (cloud.points.size() < 100) fail(ErrorCode::InvalidArgument, "correlation curve needs at least 100 points");
  if (!(grid.r_min > 0.0 && grid.r_min < grid.r_max)) fail(ErrorCode::InvalidArgument, "radius grid needs 0 < r_min < r_max");
  if (grid.count < 2) fail(ErrorCode::InvalidArgument, "radius grid needs at least two radii");

  CorrelationCurve curve;
  std::vector<double> sorted = cloud.points;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double step = std::log(grid.r_max / grid.r_min) / static_cast<double>(grid.count - 1);
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double r = k + 1 == grid.count ? grid.r_max : grid.r_min * std::exp(step * static_cast<double>(k));
    curve.radii.push_back(r);
    curve.values.push_back((n + 2.0 * static_cast<double>(close_pairs(sorted, r))) / (n * n));
  }

  if (sorted.front() == sorted.back()) {
    curve.degenerate = true;
    curve.fit_window = {grid.r_min, grid.r_max};
    return curve;
  }

  const double half_decade = std::sqrt(10.0);
  Interval window = fit_window.value_or(Interval{grid.r_min * half_decade, grid.r_max / half_decade});
  auto inside = [&](double r) { return r >= window.lo * (1 - 1e-12) && r <= window.hi * (1 + 1e-12); };
  if (!fit_window && std::count_if(curve.radii.begin(), curve.radii.end(), inside) < 3) window = {grid.r_min, grid.r_max};
  curve.fit_window = window;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  std::vector<std::pair<double, double>> xy;
  for (std::size_t k = 0; k < curve.radii.size(); ++k) {
    if (!inside(curve.radii[k]) || curve.values[k] <= 0.0) continue;
    const double x = std::log(curve.radii[k]);
    const double y = std::log(curve.values[k]);
    xy.emplace_back(x, y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1;
  }
  curve.fit_points = xy.size();
  if (xy.size() < 2) fail(ErrorCode::InvalidArgument, "fit window contains fewer than two radii");
  const double dxx = sxx - sx * sx / m;
  curve.slope = (sxy - sx * sy / m) / dxx;
  const double intercept = (sy - curve.slope * sx) / m;
  if (xy.size() > 2) {
    double sse = 0.0;
    for (const auto& [x, y] : xy) sse += (y - intercept - curve.slope * x) * (y - intercept - curve.slope * x);
    curve.slope_stderr = std::sqrt(sse / (m - 2.0) / dxx);
  }
  return curve;
}

BallMass ball_mass(const LineMeasure& measure) {
  return [&measure](double x, double r) {
    const double m = measure.ball_closed(x, r);
    return Interval{m, m};
  };
}

namespace {

constexpr std::size_t kMaxCoverDepth = 200;

struct CoverWalk {
  const CylinderMeasure& measure;
  double a, b;  // the ball [a, b]
  double stop_width;
  double lo = 0.0, hi = 0.0;

  void visit(const Word& w, const MoebiusMatrix& m, double mass) {
    if (mass <= 0.0) return;
    const SystemSpec& s = measure.system();
    const Interval& space = s.space_of(s.maps[w.back()].domain_vertex);
    const double u = static_cast<double>(m.apply(space.lo));
    const double v = static_cast<double>(m.apply(space.hi));
    const Interval img{std::min(u, v), std::max(u, v)};
    if (img.hi < a || img.lo > b) return;
    if (img.lo >= a && img.hi <= b) {
      lo += mass;
      hi += mass;
      return;
    }
    if (img.width() < stop_width || w.size() >= kMaxCoverDepth) {
      hi += mass;
      return;
    }
    for (Symbol e = 0; e < s.alphabet_size(); ++e) {
      const double p = measure.conditional(w, e);
      if (p <= 0.0) continue;
      visit(w.appended(e), m.then_inner(s.maps[e].matrix()), mass * p);
    }
  }
};

}  // namespace

BallMass ball_mass(const CylinderMeasure& measure, double resolution) {
  return [&measure, resolution](double x, double r) {
    CoverWalk walk{measure, x - r, x + r, std::max(resolution, r * 1e-4)};
    const SystemSpec& s = measure.system();
    for (Symbol e = 0; e < s.alphabet_size(); ++e) walk.visit(Word{e}, s.maps[e].matrix(), measure.mass(Word{e}));
    return Interval{walk.lo, std::max(walk.lo, walk.hi)};
  };
}

std::vector<double> dyadic_radii(double r_min, double r_max) {
  if (!(r_min > 0.0 && r_min <= r_max)) fail(ErrorCode::InvalidArgument, "dyadic radii need 0 < r_min <= r_max");
  std::vector<double> out;
  for (double r = r_max; r >= r_min * (1.0 - 1e-12); r *= 0.5) out.push_back(r);
  return out;
}

std::size_t DensityField::supported() const {
  return static_cast<std::size_t>(std::count(in_support.begin(), in_support.end(), true));
}

DensityField density_field(const BallMass& mass, const SampleCloud& cloud, const std::vector<double>& radii) {
  if (radii.empty()) fail(ErrorCode::InvalidArgument, "density field needs at least one radius");
  for (double r : radii)
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::InvalidArgument, "density radii must lie in (0, 1)");
  DensityField field;
  field.points = cloud.points;
  const auto [rmin, rmax] = std::minmax_element(radii.begin(), radii.end());
  field.radii_range = {*rmin, *rmax};
  field.radii_count = radii.size();
  const std::size_t n = cloud.points.size();
  field.lower.assign(n, 0.0);
  field.upper.assign(n, 0.0);
  field.in_support.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = cloud.points[i];
    if (mass(x, *rmax).hi <= 0.0) continue;
    field.in_support[i] = true;
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;
    for (double r : radii) {
      const Interval m = mass(x, r);
      const double lr = std::log(r);
      const double from_hi = m.hi > 0.0 ? std::max(0.0, std::log(std::min(m.hi, 1.0)) / lr)
                                        : std::numeric_limits<double>::infinity();
      const double from_lo = m.lo > 0.0 ? std::max(0.0, std::log(std::min(m.lo, 1.0)) / lr) : from_hi;
      lower = std::min(lower, from_hi);
      upper = std::max(upper, from_lo);
    }
    field.lower[i] = lower;
    field.upper[i] = std::max(upper, lower);
  }
  return field;
}

YoungResult young_criterion(const DensityField& field, double band) {
  std::vector<double> mids;
  for (std::size_t i = 0; i < field.points.size(); ++i)
    if (field.in_support[i]) mids.push_back(0.5 * (field.lower[i] + field.upper[i]));
  if (mids.empty()) fail(ErrorCode::InvalidArgument, "density field has no supported points");
  YoungResult out;
  out.c = quantile_of(mids, 0.5);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < field.points.size(); ++i)
    if (field.in_support[i] && field.lower[i] >= out.c - band && field.upper[i] <= out.c + band) ++inside;
  out.fraction = static_cast<double>(inside) / static_cast<double>(mids.size());
  return out;
}

DensityBounds eq15_bounds(const DensityField& field, double q) {
  if (!(q >= 0.0 && q <= 0.5)) fail(ErrorCode::InvalidArgument, "quantile must lie in [0, 0.5]");
  std::vector<double> lows, highs;
  for (std::size_t i = 0; i < field.points.size(); ++i)
    if (field.in_support[i]) {
      lows.push_back(field.lower[i]);
      highs.push_back(field.upper[i]);
    }
  if (lows.empty()) fail(ErrorCode::InvalidArgument, "density field has no supported points");
  return {quantile_of(lows, q), quantile_of(highs, 1.0 - q), q};
}

double min_ball_mass(const LineMeasure& measure, double s, double r) {
  std::vector<double> xs{0.0, s};
  for (double p : measure.breakpoints())
    for (double c : {p - r, p + r})
      if (c > 0.0 && c < s) xs.push_back(c);
  double best = std::numeric_limits<double>::infinity();
  for (double x : xs) best = std::min(best, measure.ball_open(x, r));
  return best;
}

FlatnessCurve flatness_detector(const LineMeasure& measure, const std::vector<double>& radii,
                                std::vector<double> candidates, double fire_threshold) {
  if (radii.empty()) fail(ErrorCode::InvalidArgument, "flatness detector needs radii");
  if (candidates.empty()) {
    candidates = radii;
    candidates.push_back(0.0);
    for (double p : measure.breakpoints())
      if (p > 0.0 && p <= 1.0) candidates.push_back(p);
    candidates.push_back(1.0);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  FlatnessCurve out;
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::InvalidArgument, "flatness radii must lie in (0, 1)");
    double best = 0.0, best_s = 0.0;
    for (double s : candidates) {
      if (s < 0.0) continue;
      const double bound = min_ball_mass(measure, s, r) * measure.mass(0.0, s);
      if (bound > best) {
        best = bound;
        best_s = s;
      }
    }
    out.radii.push_back(r);
    out.bounds.push_back(best);
    out.best_s.push_back(best_s);
    out.exponents.push_back(best > 0.0 ? std::max(0.0, std::log(std::min(best, 1.0)) / std::log(r))
                                       : std::numeric_limits<double>::infinity());
  }
  // Fires when the exponent at the finest radius is small and not above the
  // one at the coarsest.
  std::size_t finest = 0;
  for (std::size_t i = 1; i < out.radii.size(); ++i)
    if (out.radii[i] < out.radii[finest]) finest = i;
  std::size_t coarsest = 0;
  for (std::size_t i = 1; i < out.radii.size(); ++i)
    if (out.radii[i] > out.radii[coarsest]) coarsest = i;
  out.fires = out.exponents[finest] <= fire_threshold && out.exponents[finest] <= out.exponents[coarsest];
  return out;
}

}  // namespace confdim
