#pragma once

// Exact finite measures on the line: atoms plus piecewise-constant densities.

#include <cstddef>
#include <vector>

#include "confdim/interval.hpp"

namespace confdim {

struct Atom {
  double x = 0.0;
  double weight = 0.0;
};

struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;

  double mass() const { return density * (hi - lo); }
};

class LineMeasure {
 public:
  LineMeasure() = default;
  // Sorts atoms and pieces, merges atoms at equal locations, drops zero
  // entries. Pieces must have disjoint interiors.
  LineMeasure(std::vector<Atom> atoms, std::vector<Piece> pieces);

  static LineMeasure dirac(double x, double weight = 1.0);
  static LineMeasure uniform(double lo, double hi, double mass = 1.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  double total_mass() const { return total_; }
  Interval support_hull() const;

  // Mass of the interval between a and b with each endpoint in or out.
  double mass(double a, double b, bool include_a = true, bool include_b = true) const;
  double mass_closed(const Interval& i) const { return mass(i.lo, i.hi, true, true); }
  double ball_open(double x, double r) const { return mass(x - r, x + r, false, false); }
  double ball_closed(double x, double r) const { return mass(x - r, x + r, true, true); }

  // Breakpoints: atom locations and piece endpoints, sorted and unique.
  std::vector<double> breakpoints() const;

  // Exact integrals of x^j, cos(2 pi j x), sin(2 pi j x).
  double integrate_power(unsigned j) const;
  double integrate_cos(unsigned j) const;
  double integrate_sin(unsigned j) const;

  // Inverse CDF for a uniform u in [0, 1).
  double quantile(double u) const;

  // Affine push-forward x -> scale * x + shift (scale > 0) times `weight`.
  LineMeasure transformed(double scale, double shift, double weight = 1.0) const;
  // Sum of two measures with disjoint piece interiors.
  LineMeasure operator+(const LineMeasure& other) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Piece> pieces_;
  std::vector<double> atom_prefix_;   // atom_prefix_[i] = sum of weights before i
  std::vector<double> piece_prefix_;  // same for piece masses
  double total_ = 0.0;
};

// sup_A |m1(A) - m2(A)| via the Hahn decomposition of m1 - m2.
double tv_distance(const LineMeasure& m1, const LineMeasure& m2);

// A test set: a finite union of closed intervals (degenerate ones are points).
using TestSet = std::vector<Interval>;

double setwise_discrepancy(const LineMeasure& m1, const LineMeasure& m2, const std::vector<TestSet>& family);

// The cells [lo + i w, lo + (i+1) w] of a uniform grid, one set per cell.
std::vector<TestSet> interval_grid(double lo, double hi, std::size_t cells);

// max |int f dm1 - int f dm2| over {1, x, ..., x^M} and {cos, sin}(2 pi j x), j <= M.
double weak_discrepancy(const LineMeasure& m1, const LineMeasure& m2, unsigned moments);

}  // namespace confdim
