#include "confdim/line_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "confdim/error.hpp"

namespace confdim {

namespace {

constexpr std::size_t kDirectSumLimit = 32;

double range_sum(const std::vector<double>& prefix, std::size_t first, std::size_t last,
                 const auto& value_at) {
  if (last <= first) return 0.0;
  if (last - first <= kDirectSumLimit) {
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += value_at(i);
    return s;
  }
  return prefix[last] - prefix[first];
}

}  // namespace

LineMeasure::LineMeasure(std::vector<Atom> atoms, std::vector<Piece> pieces) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.x) || !(a.weight >= 0.0)) fail(ErrorCode::InvalidArgument, "atoms need finite location and weight >= 0");
  }
  for (const auto& p : pieces) {
    if (!(p.lo < p.hi) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
      fail(ErrorCode::InvalidArgument, "pieces need finite lo < hi");
    if (!(p.density >= 0.0) || !std::isfinite(p.density)) fail(ErrorCode::InvalidArgument, "piece density must be finite and >= 0");
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  for (const auto& a : atoms) {
    if (a.weight == 0.0) continue;
    if (!atoms_.empty() && atoms_.back().x == a.x)
      atoms_.back().weight += a.weight;
    else
      atoms_.push_back(a);
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  for (const auto& p : pieces) {
    if (p.density == 0.0) continue;
    if (!pieces_.empty() && p.lo < pieces_.back().hi)
      fail(ErrorCode::InvalidArgument, "pieces overlap");
    pieces_.push_back(p);
  }

  atom_prefix_.assign(1, 0.0);
  for (const auto& a : atoms_) atom_prefix_.push_back(atom_prefix_.back() + a.weight);
  piece_prefix_.assign(1, 0.0);
  for (const auto& p : pieces_) piece_prefix_.push_back(piece_prefix_.back() + p.mass());
  total_ = atom_prefix_.back() + piece_prefix_.back();
}

LineMeasure LineMeasure::dirac(double x, double weight) { return LineMeasure({{x, weight}}, {}); }

LineMeasure LineMeasure::uniform(double lo, double hi, double mass) {
  return LineMeasure({}, {{lo, hi, mass / (hi - lo)}});
}

Interval LineMeasure::support_hull() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (!atoms_.empty()) {
    lo = atoms_.front().x;
    hi = atoms_.back().x;
  }
  if (!pieces_.empty()) {
    lo = std::min(lo, pieces_.front().lo);
    hi = std::max(hi, pieces_.back().hi);
  }
  return {lo, hi};
}

double LineMeasure::mass(double a, double b, bool include_a, bool include_b) const {
  if (a > b || (a == b && !(include_a && include_b))) return 0.0;

  auto by_x = [](const Atom& at, double v) { return at.x < v; };
  auto x_by = [](double v, const Atom& at) { return v < at.x; };
  const auto a_first = include_a ? std::lower_bound(atoms_.begin(), atoms_.end(), a, by_x)
                                 : std::upper_bound(atoms_.begin(), atoms_.end(), a, x_by);
  const auto a_last = include_b ? std::upper_bound(atoms_.begin(), atoms_.end(), b, x_by)
                                : std::lower_bound(atoms_.begin(), atoms_.end(), b, by_x);
  double total = 0.0;
  if (a_first < a_last)
    total += range_sum(atom_prefix_, static_cast<std::size_t>(a_first - atoms_.begin()),
                       static_cast<std::size_t>(a_last - atoms_.begin()),
                       [&](std::size_t i) { return atoms_[i].weight; });

  if (b <= a) return total;
  // First piece ending after a, first piece starting at or after b.
  const auto p_first = std::upper_bound(pieces_.begin(), pieces_.end(), a,
                                        [](double v, const Piece& p) { return v < p.hi; });
  const auto p_last = std::lower_bound(pieces_.begin(), pieces_.end(), b,
                                       [](const Piece& p, double v) { return p.lo < v; });
  if (p_first >= p_last) return total;
  const std::size_t i0 = static_cast<std::size_t>(p_first - pieces_.begin());
  const std::size_t i1 = static_cast<std::size_t>(p_last - pieces_.begin());
  auto partial = [&](std::size_t i) {
    const Piece& p = pieces_[i];
    return p.density * (std::min(p.hi, b) - std::max(p.lo, a));
  };
  if (i1 - i0 == 1) return total + partial(i0);
  total += partial(i0);
  total += range_sum(piece_prefix_, i0 + 1, i1 - 1, [&](std::size_t i) { return pieces_[i].mass(); });
  total += partial(i1 - 1);
  return total;
}

std::vector<double> LineMeasure::breakpoints() const {
  std::vector<double> out;
  out.reserve(atoms_.size() + 2 * pieces_.size());
  for (const auto& a : atoms_) out.push_back(a.x);
  for (const auto& p : pieces_) {
    out.push_back(p.lo);
    out.push_back(p.hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double LineMeasure::integrate_power(unsigned j) const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * std::pow(a.x, static_cast<double>(j));
  const double k = static_cast<double>(j) + 1.0;
  for (const auto& p : pieces_) s += p.density * (std::pow(p.hi, k) - std::pow(p.lo, k)) / k;
  return s;
}

double LineMeasure::integrate_cos(unsigned j) const {
  if (j == 0) return total_;
  const double w = 2.0 * std::numbers::pi * j;
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * std::cos(w * a.x);
  for (const auto& p : pieces_) s += p.density * (std::sin(w * p.hi) - std::sin(w * p.lo)) / w;
  return s;
}

double LineMeasure::integrate_sin(unsigned j) const {
  if (j == 0) return 0.0;
  const double w = 2.0 * std::numbers::pi * j;
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * std::sin(w * a.x);
  for (const auto& p : pieces_) s += p.density * (std::cos(w * p.lo) - std::cos(w * p.hi)) / w;
  return s;
}

double LineMeasure::quantile(double u) const {
  if (total_ <= 0.0) fail(ErrorCode::InvalidArgument, "quantile of the zero measure");
  // Components in order of position; atoms at a piece's left end come first.
  double target = u * total_;
  std::size_t ia = 0, ip = 0;
  double last = 0.0;
  while (ia < atoms_.size() || ip < pieces_.size()) {
    const bool take_atom = ip == pieces_.size() || (ia < atoms_.size() && atoms_[ia].x <= pieces_[ip].lo);
    if (take_atom) {
      const Atom& a = atoms_[ia++];
      last = a.x;
      if (target < a.weight) return a.x;
      target -= a.weight;
    } else {
      const Piece& p = pieces_[ip++];
      last = p.hi;
      const double m = p.mass();
      if (target < m) return std::min(p.hi, p.lo + target / p.density);
      target -= m;
    }
  }
  return last;
}

LineMeasure LineMeasure::transformed(double scale, double shift, double weight) const {
  if (!(scale > 0.0)) fail(ErrorCode::InvalidArgument, "scale must be positive");
  std::vector<Atom> atoms;
  std::vector<Piece> pieces;
  for (const auto& a : atoms_) atoms.push_back({scale * a.x + shift, weight * a.weight});
  for (const auto& p : pieces_) pieces.push_back({scale * p.lo + shift, scale * p.hi + shift, weight * p.density / scale});
  return LineMeasure(std::move(atoms), std::move(pieces));
}

LineMeasure LineMeasure::operator+(const LineMeasure& other) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  std::vector<Piece> pieces = pieces_;
  pieces.insert(pieces.end(), other.pieces_.begin(), other.pieces_.end());
  return LineMeasure(std::move(atoms), std::move(pieces));
}

namespace {

double density_at(const std::vector<Piece>& pieces, double x) {
  const auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                                   [](double v, const Piece& p) { return v < p.hi; });
  if (it == pieces.end() || it->lo > x) return 0.0;
  return it->density;
}

}  // namespace

double tv_distance(const LineMeasure& m1, const LineMeasure& m2) {
  double pos = 0.0, neg = 0.0;
  auto add = [&](double d) { (d > 0.0 ? pos : neg) += std::abs(d); };

  const auto& a1 = m1.atoms();
  const auto& a2 = m2.atoms();
  std::size_t i = 0, j = 0;
  while (i < a1.size() || j < a2.size()) {
    if (j == a2.size() || (i < a1.size() && a1[i].x < a2[j].x)) {
      add(a1[i++].weight);
    } else if (i == a1.size() || a2[j].x < a1[i].x) {
      add(-a2[j++].weight);
    } else {
      add(a1[i++].weight - a2[j++].weight);
    }
  }

  std::vector<double> cuts;
  for (const auto* m : {&m1, &m2})
    for (const auto& p : m->pieces()) {
      cuts.push_back(p.lo);
      cuts.push_back(p.hi);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    const double d = density_at(m1.pieces(), mid) - density_at(m2.pieces(), mid);
    if (d != 0.0) add(d * (cuts[k + 1] - cuts[k]));
  }
  return std::max(pos, neg);
}

double setwise_discrepancy(const LineMeasure& m1, const LineMeasure& m2, const std::vector<TestSet>& family) {
  double worst = 0.0;
  for (const auto& set : family) {
    double d = 0.0;
    for (const auto& iv : set) d += m1.mass_closed(iv) - m2.mass_closed(iv);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

std::vector<TestSet> interval_grid(double lo, double hi, std::size_t cells) {
  if (cells == 0 || !(lo < hi)) fail(ErrorCode::InvalidArgument, "grid needs lo < hi and at least one cell");
  std::vector<TestSet> out;
  const double w = (hi - lo) / static_cast<double>(cells);
  for (std::size_t i = 0; i < cells; ++i)
    out.push_back({{lo + w * static_cast<double>(i), i + 1 == cells ? hi : lo + w * static_cast<double>(i + 1)}});
  return out;
}

double weak_discrepancy(const LineMeasure& m1, const LineMeasure& m2, unsigned moments) {
  double worst = 0.0;
  for (unsigned j = 0; j <= moments; ++j) {
    worst = std::max(worst, std::abs(m1.integrate_power(j) - m2.integrate_power(j)));
    if (j == 0) continue;
    worst = std::max(worst, std::abs(m1.integrate_cos(j) - m2.integrate_cos(j)));
    worst = std::max(worst, std::abs(m1.integrate_sin(j) - m2.integrate_sin(j)));
  }
  return worst;
}

}  // namespace confdim
