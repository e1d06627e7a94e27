#pragma once

// One-dimensional conformal iterated function systems and graph directed
// Markov systems: map descriptors, truncations, separation checks, and
// certified derivative bounds for compositions.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confdim/interval.hpp"
#include "confdim/symbolic.hpp"

namespace confdim {

enum class MapKind { Similitude, Affine, Moebius };

const char* to_string(MapKind kind) noexcept;

// x -> (alpha x + beta) / (gamma x + delta); every supported map kind is a
// Moebius transformation, which makes word composition a matrix product.
struct MoebiusMatrix {
  long double alpha = 1, beta = 0, gamma = 0, delta = 1;

  long double apply(long double x) const { return (alpha * x + beta) / (gamma * x + delta); }
  // |d/dx| of the transformation.
  long double derivative(long double x) const {
    const long double den = gamma * x + delta;
    const long double det = alpha * delta - beta * gamma;
    return (det < 0 ? -det : det) / (den * den);
  }
  MoebiusMatrix then_inner(const MoebiusMatrix& inner) const;  // this o inner
};

struct MapDescriptor {
  MapKind kind = MapKind::Similitude;
  double ratio = 0.5;   // a in x -> a x + b (similitude: a > 0; affine: a != 0)
  double offset = 0.0;  // b
  unsigned digit = 1;   // q in x -> 1 / (q + x), Moebius only
  std::size_t domain_vertex = 0;  // t(e)
  std::size_t range_vertex = 0;   // i(e)

  static MapDescriptor similitude(double a, double b, std::size_t from = 0, std::size_t to = 0);
  static MapDescriptor affine(double a, double b, std::size_t from = 0, std::size_t to = 0);
  static MapDescriptor continued_fraction(unsigned q, std::size_t from = 0, std::size_t to = 0);

  bool has_constant_derivative() const { return kind != MapKind::Moebius; }

  double apply(double x) const;
  double derivative(double x) const;  // absolute value
  MoebiusMatrix matrix() const;

  // Outward-rounded enclosures over an interval of the domain.
  Interval image(const Interval& x) const;
  Interval derivative_bounds(const Interval& x) const;
  // One-step sup |s'| / inf |s'| over the domain space.
  double distortion_on(const Interval& domain) const;
};

enum class Flavor { Cifs, Gdms };

// Possibly infinite, indexed family of maps on a common space. Truncations
// take the first n members.
struct MapFamily {
  std::string name;
  std::optional<std::size_t> declared_size;  // nullopt: countably infinite
  std::function<MapDescriptor(std::size_t index)> generator;
  double distortion = 1.0;
  Interval space{0.0, 1.0};
  // log sum_i |s_i'|^t over the whole family (similitude families only); +inf
  // where the series diverges.
  std::function<double(double t)> analytic_log_sum;
  // |s_i'| for similitude families.
  std::function<double(std::size_t index)> ratio;
};

struct SystemSpec {
  std::string name;
  Flavor flavor = Flavor::Cifs;
  std::vector<Interval> vertices;
  std::vector<MapDescriptor> maps;  // active alphabet
  IncidenceMatrix incidence;
  double distortion = 1.0;  // K
  double gamma = 0.5;       // word-level contraction factor
  std::size_t gamma_word_length = 1;
  std::size_t grid_cells = 64;
  bool separation_ok = true;
  // Declared, not verified: cone condition and C^{1+theta} extension.
  bool cone_condition_declared = true;
  bool smooth_extension_declared = true;
  std::shared_ptr<const MapFamily> family;

  std::size_t alphabet_size() const { return maps.size(); }
  std::size_t truncation_level() const { return maps.size(); }
  bool all_constant_derivative() const;
  bool full_shift() const { return incidence.is_full(); }
  std::optional<IncidenceMatrix> admissibility() const {
    return full_shift() ? std::nullopt : std::optional<IncidenceMatrix>(incidence);
  }
  const Interval& space_of(std::size_t vertex) const { return vertices.at(vertex); }
};

struct SystemOptions {
  std::size_t grid_cells = 64;
  bool allow_overlap = false;
  std::optional<double> distortion;  // override the computed K
};

// Validates contraction, vertex consistency of the incidence matrix and (unless
// allow_overlap) the open set condition.
SystemSpec make_system(std::string name, Flavor flavor, std::vector<Interval> vertices,
                       std::vector<MapDescriptor> maps, std::optional<IncidenceMatrix> incidence,
                       const SystemOptions& options = {});

std::shared_ptr<const MapFamily> golden_family();
std::shared_ptr<const MapFamily> continued_fraction_family();
std::shared_ptr<const MapFamily> cantor_family(std::vector<double> ratios);

// The first n members of a family as a CIFS.
SystemSpec system_from_family(std::shared_ptr<const MapFamily> family, std::size_t n,
                              const SystemOptions& options = {});

// Sub-system on the first n maps with A restricted to E_n x E_n.
SystemSpec truncate(const SystemSpec& system, std::size_t n);

struct WordGeometry {
  Word word;
  double derivative_sup = 0.0;
  double derivative_inf = 0.0;
  Interval image;
  // |s_w'| at the midpoint of the terminal vertex space.
  double derivative_at_reference = 0.0;
};

// Incremental front extension: from the geometry of w, build that of e w.
// Derivative enclosures are carried per grid cell of the terminal space.
class GeometryBuilder {
 public:
  GeometryBuilder(const SystemSpec& system, std::size_t terminal_vertex);

  void extend_front(const MapDescriptor& map);

  double derivative_sup() const;
  double derivative_inf() const;
  const Interval& image() const { return whole_; }
  double derivative_at_reference() const { return point_derivative_; }

 private:
  bool exact_ = false;
  std::vector<Interval> cell_images_;
  std::vector<Interval> cell_derivatives_;
  double exact_derivative_ = 1.0;
  Interval whole_;
  double point_ = 0.0;
  double point_derivative_ = 1.0;
};

WordGeometry compose_geometry(const SystemSpec& system, const Word& word);

bool is_admissible(const SystemSpec& system, const Word& word);

// Image s_w(X_{t(w)}) evaluated without outward rounding.
Interval word_image(const SystemSpec& system, const Word& word);

struct SeparationReport {
  bool ok = true;
  std::optional<std::pair<Symbol, Symbol>> overlapping;
};

SeparationReport check_separation(const SystemSpec& system);

}  // namespace confdim
