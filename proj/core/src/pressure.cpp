#include "confdim/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "confdim/error.hpp"
#include "logsum.hpp"

namespace confdim {

namespace {

constexpr double kMaxWords = 5e7;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_args(const SystemSpec& system, double t, std::size_t depth) {
  if (!(t >= 0.0)) fail(ErrorCode::InvalidArgument, "exponent t must be >= 0");
  if (depth == 0) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  if (system.maps.size() < 2) fail(ErrorCode::InvalidArgument, "system must have at least two maps");
}

double admissible_count(const SystemSpec& system, std::size_t depth) {
  if (system.full_shift()) return std::pow(static_cast<double>(system.maps.size()), static_cast<double>(depth));
  const auto p = system.incidence.real_power(depth - 1);
  double total = 0.0;
  for (double v : p) total += v;
  return total;
}

void guard_enumeration(const SystemSpec& system, std::size_t depth) {
  const double count = admissible_count(system, depth);
  if (count == 0.0) fail(ErrorCode::EmptyAdmissibleSet, "no admissible words at depth " + std::to_string(depth));
  if (count > kMaxWords)
    fail(ErrorCode::InvalidArgument, "depth " + std::to_string(depth) + " would enumerate " +
                                         std::to_string(static_cast<long long>(count)) + " words");
}

// Visits every admissible word up to `depth`, built back to front so that each
// node is one front extension of its parent.
template <class Visit>
void walk_geometry(const SystemSpec& system, const GeometryBuilder& b, Symbol first, std::size_t level,
                   std::size_t depth, Visit& visit) {
  visit(level, b);
  if (level == depth) return;
  for (Symbol f = 0; f < system.maps.size(); ++f) {
    if (!system.incidence.allows(f, first)) continue;
    GeometryBuilder next = b;
    next.extend_front(system.maps[f]);
    walk_geometry(system, next, f, level + 1, depth, visit);
  }
}

template <class Visit>
void walk_all(const SystemSpec& system, std::size_t depth, Visit&& visit) {
  for (Symbol e = 0; e < system.maps.size(); ++e) {
    GeometryBuilder b(system, system.maps[e].domain_vertex);
    b.extend_front(system.maps[e]);
    walk_geometry(system, b, e, 1, depth, visit);
  }
}

// log |s_w'(x_ref)| for all admissible words of length depth-1 and depth.
struct PointCache {
  std::vector<double> previous;
  std::vector<double> current;
};

void walk_points(const SystemSpec& system, double x, double log_d, Symbol first, std::size_t level,
                 std::size_t depth, PointCache& cache) {
  if (level == depth) {
    cache.current.push_back(log_d);
    return;
  }
  if (level + 1 == depth) cache.previous.push_back(log_d);
  for (Symbol f = 0; f < system.maps.size(); ++f) {
    if (!system.incidence.allows(f, first)) continue;
    const auto& m = system.maps[f];
    walk_points(system, m.apply(x), log_d + std::log(m.derivative(x)), f, level + 1, depth, cache);
  }
}

PointCache point_cache(const SystemSpec& system, std::size_t depth) {
  PointCache cache;
  for (Symbol e = 0; e < system.maps.size(); ++e) {
    const auto& m = system.maps[e];
    const double x = system.space_of(m.domain_vertex).mid();
    if (depth == 1) {
      cache.current.push_back(std::log(m.derivative(x)));
      continue;
    }
    walk_points(system, m.apply(x), std::log(m.derivative(x)), e, 1, depth, cache);
  }
  return cache;
}

double cached_refined(const PointCache& cache, double t) {
  detail::LogSum cur, prev;
  for (double l : cache.current) cur.add(t * l);
  for (double l : cache.previous) prev.add(t * l);
  return cur.value() - (cache.previous.empty() ? 0.0 : prev.value());
}

// Perron root of a nonnegative matrix with Collatz-Wielandt bounds.
struct Perron {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t iterations = 0;
};

Perron perron_root(const std::vector<double>& m, std::size_t n, double tol, std::size_t max_iters) {
  std::vector<double> x(n, 1.0), y(n);
  double lo = 0.0, hi = kInf;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m[i * n + j] * x[j];
      y[i] = s;
    }
    lo = kInf;
    hi = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] > 0.0) {
        const double r = y[i] / x[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      norm += y[i];
    }
    if (norm == 0.0) fail(ErrorCode::DegenerateSystem, "nilpotent transition matrix");
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
    if (hi - lo <= tol * hi) return {lo, hi, it};
  }
  throw IterationLimitError("Perron iteration did not converge", (hi - lo) / hi);
}

SpectralPressure spectral_impl(const SystemSpec& system, double t, double tol, std::size_t max_iters) {
  const std::size_t n = system.maps.size();
  std::vector<double> sup_w(n), inf_w(n);
  for (std::size_t e = 0; e < n; ++e) {
    const auto& m = system.maps[e];
    const Interval d = m.derivative_bounds(system.space_of(m.domain_vertex));
    sup_w[e] = std::pow(d.hi, t);
    inf_w[e] = std::pow(d.lo, t);
  }
  std::vector<double> mu(n * n, 0.0), ml(n * n, 0.0);
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t f = 0; f < n; ++f)
      if (system.incidence.allows(static_cast<Symbol>(e), static_cast<Symbol>(f))) {
        mu[e * n + f] = sup_w[f];
        ml[e * n + f] = inf_w[f];
      }
  const Perron pu = perron_root(mu, n, tol, max_iters);
  const Perron pl = system.all_constant_derivative() ? pu : perron_root(ml, n, tol, max_iters);
  return {std::log(pu.upper), std::log(pl.lower), pu.iterations + pl.iterations};
}

// Exact pressure for constant-derivative systems.
double exact_pressure(const SystemSpec& system, double t) {
  if (system.full_shift()) {
    // plain sum keeps P(1) = 0 exact for systems such as (1/2, 1/2)
    double s = 0.0;
    for (const auto& m : system.maps) s += std::pow(std::abs(m.ratio), t);
    return std::log(s);
  }
  const auto sp = spectral_impl(system, t, 1e-14, 1000000);
  return 0.5 * (sp.upper + sp.lower);
}

}  // namespace

PartitionSum partition_sum(const SystemSpec& system, double t, std::size_t depth) {
  check_args(system, t, depth);
  PartitionSum out;
  if (system.all_constant_derivative()) {
    // v_e = weighted count of admissible words of the current length starting with e
    const std::size_t n = system.maps.size();
    std::vector<double> v(n);
    for (std::size_t e = 0; e < n; ++e) v[e] = std::pow(std::abs(system.maps[e].ratio), t);
    double log_scale = 0.0;
    double count = static_cast<double>(n);
    std::vector<double> c(n, 1.0);
    for (std::size_t level = 1; level < depth; ++level) {
      std::vector<double> next(n, 0.0), next_c(n, 0.0);
      for (std::size_t e = 0; e < n; ++e)
        for (std::size_t f = 0; f < n; ++f)
          if (system.incidence.allows(static_cast<Symbol>(e), static_cast<Symbol>(f))) {
            next[e] += v[f];
            next_c[e] += c[f];
          }
      double norm = 0.0;
      for (std::size_t e = 0; e < n; ++e) {
        next[e] *= std::pow(std::abs(system.maps[e].ratio), t);
        norm += next[e];
      }
      if (norm == 0.0) fail(ErrorCode::EmptyAdmissibleSet, "no admissible words at depth " + std::to_string(depth));
      for (auto& x : next) x /= norm;
      log_scale += std::log(norm);
      v = std::move(next);
      c = std::move(next_c);
    }
    double total = 0.0;
    count = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
      total += v[e];
      count += c[e];
    }
    out.log_upper = out.log_lower = log_scale + std::log(total);
    out.words = static_cast<std::size_t>(count);
    return out;
  }

  guard_enumeration(system, depth);
  detail::LogSum up, low;
  walk_all(system, depth, [&](std::size_t level, const GeometryBuilder& b) {
    if (level != depth) return;
    up.add(t * std::log(b.derivative_sup()));
    low.add(t * std::log(b.derivative_inf()));
    ++out.words;
  });
  out.log_upper = up.value();
  out.log_lower = low.value();
  return out;
}

PressureEstimate pressure(const SystemSpec& system, double t, std::size_t depth) {
  check_args(system, t, depth);
  PressureEstimate est;
  est.t = t;
  est.depth = depth;
  est.bdp_gap = t / static_cast<double>(depth) * std::log(system.distortion);

  if (system.all_constant_derivative()) {
    const double p = exact_pressure(system, t);
    est.upper = est.lower = est.value = est.refined = p;
    est.exact = true;
    return est;
  }

  guard_enumeration(system, depth);
  detail::LogSum up, low, ref_cur, ref_prev;
  walk_all(system, depth, [&](std::size_t level, const GeometryBuilder& b) {
    if (level == depth) {
      up.add(t * std::log(b.derivative_sup()));
      low.add(t * std::log(b.derivative_inf()));
      ref_cur.add(t * std::log(b.derivative_at_reference()));
    } else if (level + 1 == depth) {
      ref_prev.add(t * std::log(b.derivative_at_reference()));
    }
  });
  const double inv = 1.0 / static_cast<double>(depth);
  est.upper = up.value() * inv;
  // Z_inf is supermultiplicative only when every concatenation is admissible.
  est.lower = system.full_shift() ? low.value() * inv : -kInf;
  const auto sp = spectral_impl(system, t, 1e-13, 1000000);
  est.upper = std::min(est.upper, sp.upper);
  est.lower = std::max(est.lower, sp.lower);
  est.value = 0.5 * (est.upper + est.lower);
  const double refined = ref_cur.value() - (depth > 1 ? ref_prev.value() : 0.0);
  est.refined = std::clamp(refined, est.lower, est.upper);
  return est;
}

double analytic_pressure(const MapFamily& family, double t) {
  if (!family.analytic_log_sum) fail(ErrorCode::Unsupported, "family " + family.name + " has no closed-form pressure");
  return family.analytic_log_sum(t);
}

SpectralPressure spectral_pressure(const SystemSpec& system, double t, double tol, std::size_t max_iters) {
  check_args(system, t, 1);
  return spectral_impl(system, t, tol, max_iters);
}

double default_bowen_tol(const SystemSpec& system) {
  return system.all_constant_derivative() ? 1e-10 : 1e-6;
}

namespace {

BowenSolution bisect(const std::function<double(double)>& p, double tol, double t_min) {
  BowenSolution sol;
  const double p_lo = p(t_min);
  const double p_hi = p(1.0);
  if (!(p_lo > 0.0)) {
    sol.note = "pressure is not positive at t = 0";
    sol.h = 0.0;
    sol.residual = std::abs(p_lo);
    sol.bracket = {0.0, 0.0};
    return sol;
  }
  if (p_hi > 0.0) {
    sol.note = "pressure is positive at t = 1";
    sol.h = 1.0;
    sol.residual = p_hi;
    sol.bracket = {1.0, 1.0};
    return sol;
  }
  sol.regular = true;
  if (p_hi == 0.0) {
    sol.h = 1.0;
    sol.bracket = {1.0, 1.0};
    return sol;
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo >= tol && sol.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    const double v = p(mid);
    ++sol.iterations;
    if (v == 0.0) {
      lo = hi = mid;
      break;
    }
    (v > 0.0 ? lo : hi) = mid;
  }
  sol.h = 0.5 * (lo + hi);
  sol.bracket = {lo, hi};
  sol.residual = std::abs(p(sol.h));
  return sol;
}

}  // namespace

BowenSolution bowen_solve(const SystemSpec& system, std::size_t depth, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  check_args(system, 0.0, depth);
  BowenSolution sol;
  if (system.all_constant_derivative()) {
    sol = bisect([&](double t) { return exact_pressure(system, t); }, tol, 0.0);
  } else {
    guard_enumeration(system, depth);
    const PointCache cache = point_cache(system, depth);
    sol = bisect([&](double t) { return cached_refined(cache, t); }, tol, 0.0);
  }
  sol.depth = depth;
  if (sol.regular) sol.at_root = pressure(system, sol.h, depth);
  return sol;
}

BowenSolution bowen_solve_analytic(const MapFamily& family, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (!family.analytic_log_sum) fail(ErrorCode::Unsupported, "family " + family.name + " has no closed-form pressure");
  // P may be +inf near 0 for infinite families; bisection treats it as positive.
  BowenSolution sol = bisect(family.analytic_log_sum, tol, std::min(tol, 1e-12));
  sol.analytic = true;
  return sol;
}

ScanResult truncation_scan(std::shared_ptr<const MapFamily> family, std::size_t n_lo, std::size_t n_hi,
                           std::size_t depth, double tol, const SystemOptions& options) {
  if (!family) fail(ErrorCode::InvalidArgument, "null family");
  if (n_lo < 2) fail(ErrorCode::InvalidArgument, "scan range must start at n >= 2");
  if (n_hi < n_lo) fail(ErrorCode::InvalidArgument, "scan range is reversed");
  ScanResult result;
  double previous = -kInf;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    ScanRow row;
    row.n = n;
    try {
      const SystemSpec s = system_from_family(family, n, options);
      row.solution = bowen_solve(s, depth, tol);
      if (!row.solution.regular) row.error = "irregular: " + row.solution.note;
    } catch (const Error& e) {
      row.error = e.what();
    }
    if (row.error.empty()) {
      if (row.solution.h < previous - 1e-9) result.monotone = false;
      previous = row.solution.h;
    }
    result.rows.push_back(std::move(row));
  }
  if (family->analytic_log_sum && !family->declared_size)
    result.limit = bowen_solve_analytic(*family, std::min(tol, 1e-12)).h;
  return result;
}

}  // namespace confdim
