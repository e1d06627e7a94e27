#pragma once

// Partition functions, topological pressure, Bowen's equation and the
// truncation scan h_n -> h.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "confdim/interval.hpp"
#include "confdim/systems.hpp"

namespace confdim {

// Log-domain partition sums over admissible words of one depth.
struct PartitionSum {
  double log_upper = 0.0;  // log sum of derivative-sup^t
  double log_lower = 0.0;  // log sum of derivative-inf^t
  std::size_t words = 0;
};

PartitionSum partition_sum(const SystemSpec& system, double t, std::size_t depth);

struct PressureEstimate {
  double t = 0.0;
  std::size_t depth = 0;
  double upper = 0.0;  // (1/n) log Z_n with derivative sups; >= P(t)
  double lower = 0.0;  // with derivative infs; <= P(t)
  double value = 0.0;  // midpoint
  // log(Z_n / Z_{n-1}) at the reference point, clamped into [lower, upper].
  // Converges geometrically in n, unlike the midpoint.
  double refined = 0.0;
  double bdp_gap = 0.0;  // (t/n) log K
  bool exact = false;    // upper == lower (similitudes)

  double width() const { return upper - lower; }
};

PressureEstimate pressure(const SystemSpec& system, double t, std::size_t depth);

// Pressure of a whole (possibly infinite) family from its closed form.
double analytic_pressure(const MapFamily& family, double t);

// log of the Perron root of M_{ee'} = A_{ee'} |s'_{e'}|^t with |s'| replaced by
// its sup (upper) or inf (lower) over the domain vertex space.
struct SpectralPressure {
  double upper = 0.0;
  double lower = 0.0;
  std::size_t iterations = 0;
};

SpectralPressure spectral_pressure(const SystemSpec& system, double t, double tol = 1e-14,
                                   std::size_t max_iters = 100000);

struct BowenSolution {
  double h = 0.0;
  Interval bracket;  // final t-bracket
  double residual = 0.0;  // |P(h)|
  std::size_t depth = 0;
  bool regular = false;
  bool analytic = false;
  std::size_t iterations = 0;
  std::optional<PressureEstimate> at_root;  // certified bracket at h
  std::string note;
};

double default_bowen_tol(const SystemSpec& system);

// Bisection on [0, 1] for P(t) = 0. An irregular system (no sign change) is
// reported through `regular`, not thrown.
BowenSolution bowen_solve(const SystemSpec& system, std::size_t depth, double tol);

// Root of the closed-form family pressure.
BowenSolution bowen_solve_analytic(const MapFamily& family, double tol);

struct ScanRow {
  std::size_t n = 0;
  BowenSolution solution;
  std::string error;  // non-empty when this truncation failed
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<double> limit;  // analytic h of the whole family
  bool monotone = true;         // h_{n+1} >= h_n - 1e-9 across successful rows
};

ScanResult truncation_scan(std::shared_ptr<const MapFamily> family, std::size_t n_lo, std::size_t n_hi,
                           std::size_t depth, double tol, const SystemOptions& options = {});

}  // namespace confdim
