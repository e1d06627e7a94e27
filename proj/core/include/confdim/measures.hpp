#pragma once

// Cylinder measures on symbol space, the example gallery of line measures,
// truncation diagnostics and sampling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "confdim/line_measure.hpp"
#include "confdim/systems.hpp"

namespace confdim {

class CylinderMeasure {
 public:
  // `masses` holds every admissible word of length 1..depth.
  CylinderMeasure(std::shared_ptr<const SystemSpec> system, std::size_t depth, std::map<Word, double> masses);

  // Builds shorter cylinders by summing the depth-k masses upward, so
  // additivity holds by construction.
  static CylinderMeasure from_depth_masses(std::shared_ptr<const SystemSpec> system, std::size_t depth,
                                           const std::map<Word, double>& depth_masses);

  const SystemSpec& system() const { return *system_; }
  std::shared_ptr<const SystemSpec> system_ptr() const { return system_; }
  std::size_t depth() const { return depth_; }
  const std::map<Word, double>& masses() const { return masses_; }

  // Stored mass, or beyond the stored depth the Markov extension through
  // (depth-1)-suffix conditionals. Zero for words outside the alphabet.
  double mass(const Word& w) const;
  // P(next symbol = e | prefix).
  double conditional(const Word& prefix, Symbol e) const;

  double total() const;
  bool normalized() const;
  // max |m(w) - sum_e m(we)| over stored words of length < depth.
  double additivity_error() const;

 private:
  double stored(const Word& w) const;

  std::shared_ptr<const SystemSpec> system_;
  std::size_t depth_;
  std::map<Word, double> masses_;
};

// Masses proportional to ||s_w'||^h on depth-k words, normalised to 1.
CylinderMeasure conformal_cylinder_measure(const SystemSpec& system, double h, std::size_t depth);

// Closed-form conformal mass a_w^h for a similitude family.
double family_cylinder_mass(const MapFamily& family, double h, const Word& w);

// max |m1(w) - m2(w)| over words of length 1..depth over `alphabet` symbols
// (full shift).
using CylinderMassFn = std::function<double(const Word&)>;
double setwise_discrepancy(const CylinderMassFn& m1, const CylinderMassFn& m2, std::size_t alphabet,
                           std::size_t depth);

// Depth-n canonical mass distribution: a_w^h spread uniformly over X_w.
LineMeasure mass_distribution_sequence(const SystemSpec& system, double h, std::size_t n);

struct GalleryInfo {
  std::string name;
  std::string description;
  bool takes_parameter = false;
};

std::vector<GalleryInfo> gallery_list();

// n-th member of a named sequence; `a` is used by exm3.7 only.
LineMeasure gallery_member(const std::string& name, std::size_t n, double a = 0.5);

struct GalleryLimit {
  LineMeasure measure;
  bool exact = true;  // false when the limit is itself an approximation
  std::string note;
};

GalleryLimit gallery_limit(const std::string& name, double a = 0.5);

struct GallerySequence {
  std::string name;
  std::vector<LineMeasure> members;  // members[i] is nu_{i+1}
  GalleryLimit limit;
};

GallerySequence gallery(const std::string& name, std::size_t n_max, double a = 0.5);

// m_{n2}-mass of the depth-D cylinders using only the first n1 symbols,
// (sum_{i<n1} a_i^{h_{n2}})^D.
double truncation_singularity(const MapFamily& family, std::size_t n1, std::size_t n2, double h_n2, std::size_t depth);

// 1 - truncation_singularity: m_{n1} gives those cylinders full mass.
double truncation_tv_lower_bound(const MapFamily& family, std::size_t n1, std::size_t n2, double h_n2,
                                 std::size_t depth);

struct SampleCloud {
  std::vector<double> points;
  std::uint64_t seed = 0;
  std::string source;
};

SampleCloud sample(const LineMeasure& measure, std::size_t count, std::uint64_t seed, std::string source = "line");

// Digit-by-digit sampling; each point is the midpoint of a cylinder image
// shorter than `resolution`.
SampleCloud sample(const CylinderMeasure& measure, std::size_t count, std::uint64_t seed,
                   double resolution = 1e-9, std::string source = "cylinder");

// The symbol words used to produce each point, for frequency checks.
std::vector<Word> sample_words(const CylinderMeasure& measure, std::size_t count, std::uint64_t seed,
                               std::size_t length);

}  // namespace confdim
