#include "confdim/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "confdim/error.hpp"

namespace confdim {

namespace {

void check_potential(const PotentialSpec& p) {
  if (!(p.t >= 0.0) || !std::isfinite(p.t)) fail(ErrorCode::InvalidArgument, "potential exponent must be finite and >= 0");
}

// Bracket of |s_e'| over the image of the cylinder w (the whole vertex space
// when w is empty).
Interval edge_derivative_on(const SystemSpec& system, Symbol e, const Word& w) {
  const auto& m = system.maps[e];
  const Interval x = w.empty() ? system.space_of(m.domain_vertex) : word_image(system, w);
  return m.derivative_bounds(x);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double summability_bound(const SystemSpec& system, const PotentialSpec& potential) {
  check_potential(potential);
  double s = 0.0;
  for (Symbol e = 0; e < system.alphabet_size(); ++e)
    s += std::pow(edge_derivative_on(system, e, Word{}).hi, potential.t);
  return s;
}

double potential_variation(const SystemSpec& system, const PotentialSpec& potential, std::size_t depth) {
  return build_operator(system, potential, depth).variation;
}

std::vector<double> OperatorMatrix::apply(const std::vector<double>& g) const {
  std::vector<double> y(size(), 0.0);
  for (const auto& en : entries) y[en.row] += en.weight * g[en.col];
  return y;
}

std::vector<double> OperatorMatrix::apply_transpose(const std::vector<double>& mu) const {
  std::vector<double> y(size(), 0.0);
  for (const auto& en : entries) y[en.col] += mu[en.row] * en.weight;
  return y;
}

OperatorMatrix build_operator(const SystemSpec& system, const PotentialSpec& potential, std::size_t depth) {
  check_potential(potential);
  if (depth == 0) fail(ErrorCode::InvalidArgument, "operator depth must be >= 1");
  const std::size_t n = system.alphabet_size();
  if (!system.full_shift() && !finitely_primitive_witness(system.incidence, (n - 1) * (n - 1) + 1))
    fail(ErrorCode::Reducible, "incidence matrix is not primitive");

  OperatorMatrix op;
  op.depth = depth;
  for (const Word& w : enumerate_admissible(system.admissibility(), n, depth)) op.states.push_back(w);
  auto index_of = [&](const Word& w) {
    const auto it = std::lower_bound(op.states.begin(), op.states.end(), w);
    return static_cast<std::size_t>(it - op.states.begin());
  };

  for (std::size_t row = 0; row < op.states.size(); ++row) {
    const Word& w = op.states[row];
    const Interval image = word_image(system, w);
    for (Symbol e = 0; e < n; ++e) {
      if (!system.incidence.allows(e, w.front())) continue;
      const Interval d = system.maps[e].derivative_bounds(image);
      const double weight = std::pow(d.mid(), potential.t);
      op.entries.push_back({row, index_of(w.prepended(e).prefix(depth)), weight});
      op.variation = std::max(op.variation, potential.t * (std::log(d.hi) - std::log(d.lo)));
    }
  }
  return op;
}

GibbsState eigenmeasure(const OperatorMatrix& matrix, double tol, std::size_t max_iters) {
  const std::size_t n = matrix.size();
  if (n == 0) fail(ErrorCode::EmptyAdmissibleSet, "operator has no states");
  GibbsState st;
  st.states = matrix.states;

  // Left eigenvector: mu M = lambda mu.
  std::vector<double> mu(n, 1.0 / static_cast<double>(n));
  double lambda = 0.0;
  double change = 0.0;
  std::size_t it = 0;
  for (; it < max_iters; ++it) {
    std::vector<double> next = matrix.apply_transpose(mu);
    lambda = 0.0;
    for (double x : next) lambda += x;
    if (!(lambda > 0.0)) fail(ErrorCode::DegenerateSystem, "operator annihilates the uniform measure");
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= lambda;
      change = std::max(change, std::abs(next[i] - mu[i]));
    }
    mu = std::move(next);
    if (change <= tol * max_abs(mu)) break;
  }
  if (it == max_iters) throw IterationLimitError("eigenmeasure iteration did not converge", change);
  st.iterations = it + 1;

  // Right eigenvector: M v = lambda v.
  std::vector<double> v(n, 1.0);
  for (it = 0; it < max_iters; ++it) {
    std::vector<double> next = matrix.apply(v);
    const double scale = max_abs(next);
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= scale;
      change = std::max(change, std::abs(next[i] - v[i]));
    }
    v = std::move(next);
    if (change <= tol) break;
  }
  if (it == max_iters) throw IterationLimitError("density iteration did not converge", change);
  st.iterations += it + 1;

  double dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += mu[i] * v[i];
  for (auto& x : v) x /= dot;

  st.eigenvalue = lambda;
  const auto mu_m = matrix.apply_transpose(mu);
  for (std::size_t i = 0; i < n; ++i) st.eigen_residual = std::max(st.eigen_residual, std::abs(mu_m[i] - lambda * mu[i]));
  const auto m_v = matrix.apply(v);
  for (std::size_t i = 0; i < n; ++i)
    st.density_residual = std::max(st.density_residual, std::abs(m_v[i] - lambda * v[i]));
  st.density_residual /= max_abs(v);

  st.invariant.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += st.invariant[i] = mu[i] * v[i];
  for (auto& x : st.invariant) x /= total;

  st.transitions.reserve(matrix.entries.size());
  for (const auto& en : matrix.entries)
    st.transitions.push_back({en.row, en.col, en.weight * v[en.col] / (lambda * v[en.row])});

  if (matrix.depth > 1) {
    std::map<Word, double> by_prefix, by_suffix;
    for (std::size_t i = 0; i < n; ++i) {
      by_prefix[st.states[i].prefix(matrix.depth - 1)] += st.invariant[i];
      by_suffix[st.states[i].suffix_from(1)] += st.invariant[i];
    }
    for (const auto& [u, m] : by_prefix) {
      const auto it2 = by_suffix.find(u);
      st.invariance_residual = std::max(st.invariance_residual, std::abs(m - (it2 == by_suffix.end() ? 0.0 : it2->second)));
    }
  }

  st.eigenmeasure = std::move(mu);
  st.density = std::move(v);
  return st;
}

CylinderMeasure invariant_measure(const GibbsState& state, const SystemSpec& system) {
  std::map<Word, double> masses;
  for (std::size_t i = 0; i < state.states.size(); ++i) masses.emplace(state.states[i], state.invariant[i]);
  const std::size_t depth = state.states.empty() ? 1 : state.states.front().size();
  return CylinderMeasure::from_depth_masses(std::make_shared<const SystemSpec>(system), depth, masses);
}

EntropyLyapunov entropy_lyapunov(const GibbsState& state, const SystemSpec& system, const PotentialSpec& potential) {
  check_potential(potential);
  EntropyLyapunov out;
  for (const auto& tr : state.transitions)
    if (tr.weight > 0.0) out.entropy -= state.invariant[tr.row] * tr.weight * std::log(tr.weight);
  out.entropy = std::max(out.entropy, 0.0);
  for (std::size_t i = 0; i < state.states.size(); ++i) {
    const Word& w = state.states[i];
    const Interval d = edge_derivative_on(system, w.front(), w.suffix_from(1));
    out.lyapunov -= state.invariant[i] * std::log(d.mid());
  }
  if (!(out.lyapunov > 0.0)) fail(ErrorCode::DegenerateSystem, "Lyapunov exponent is not positive");
  out.ratio = out.entropy / out.lyapunov;
  return out;
}

}  // namespace confdim
