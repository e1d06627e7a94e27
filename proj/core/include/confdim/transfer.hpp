#pragma once

// Finite-rank Ruelle-Perron-Frobenius operators on depth-k cylinder
// functions, their eigenmeasures and the induced Gibbs states.

#include <cstddef>
#include <map>
#include <vector>

#include "confdim/measures.hpp"
#include "confdim/systems.hpp"

namespace confdim {

// Geometric potential f = t log|s'|.
struct PotentialSpec {
  double t = 0.0;
  double holder_exponent = 1.0;

  static PotentialSpec geometric(double t) { return {t, 1.0}; }
};

// sum_e sup |s_e'|^t over the active alphabet.
double summability_bound(const SystemSpec& system, const PotentialSpec& potential);

// sup over depth-k cylinders of the oscillation of f(e w) on [w]; bounds the
// error of the rank-k approximation.
double potential_variation(const SystemSpec& system, const PotentialSpec& potential, std::size_t depth);

struct OperatorMatrix {
  struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    double weight = 0.0;
  };

  std::size_t depth = 0;
  std::vector<Word> states;    // admissible depth-k words, lexicographic
  std::vector<Entry> entries;  // row-major; M[w, (e w)|_k] = exp f(e w)
  double variation = 0.0;

  std::size_t size() const { return states.size(); }
  std::vector<double> apply(const std::vector<double>& g) const;            // M g
  std::vector<double> apply_transpose(const std::vector<double>& mu) const;  // mu M
};

OperatorMatrix build_operator(const SystemSpec& system, const PotentialSpec& potential, std::size_t depth);

struct GibbsState {
  double eigenvalue = 0.0;
  std::vector<Word> states;
  std::vector<double> eigenmeasure;  // mu M = lambda mu, sum 1
  std::vector<double> density;       // M v = lambda v, mu . v = 1
  std::vector<double> invariant;     // mu_i v_i, sum 1
  // Induced Markov chain P[w, w'] = M[w, w'] v(w') / (lambda v(w)); its
  // stationary distribution is `invariant`.
  std::vector<OperatorMatrix::Entry> transitions;
  double eigen_residual = 0.0;       // ||mu M - lambda mu||_inf
  double density_residual = 0.0;     // ||M v - lambda v||_inf / ||v||_inf
  double invariance_residual = 0.0;  // shift invariance on depth-(k-1) cylinders
  std::size_t iterations = 0;
};

GibbsState eigenmeasure(const OperatorMatrix& matrix, double tol = 1e-13, std::size_t max_iters = 200000);

// mu* as a cylinder measure on the system.
CylinderMeasure invariant_measure(const GibbsState& state, const SystemSpec& system);

struct EntropyLyapunov {
  double entropy = 0.0;
  double lyapunov = 0.0;
  double ratio = 0.0;
};

EntropyLyapunov entropy_lyapunov(const GibbsState& state, const SystemSpec& system, const PotentialSpec& potential);

}  // namespace confdim
