#include "confdim/systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "confdim/error.hpp"

namespace confdim {

const char* to_string(MapKind kind) noexcept {
  switch (kind) {
    case MapKind::Similitude: return "similitude";
    case MapKind::Affine: return "affine-1d";
    case MapKind::Moebius: return "moebius-1d";
  }
  return "unknown";
}

MoebiusMatrix MoebiusMatrix::then_inner(const MoebiusMatrix& inner) const {
  return {alpha * inner.alpha + beta * inner.gamma, alpha * inner.beta + beta * inner.delta,
          gamma * inner.alpha + delta * inner.gamma, gamma * inner.beta + delta * inner.delta};
}

MapDescriptor MapDescriptor::similitude(double a, double b, std::size_t from, std::size_t to) {
  if (!(a > 0.0 && a < 1.0)) fail(ErrorCode::InvalidArgument, "similitude ratio must lie in (0,1)");
  return {MapKind::Similitude, a, b, 1, from, to};
}

MapDescriptor MapDescriptor::affine(double a, double b, std::size_t from, std::size_t to) {
  if (!(a != 0.0 && std::abs(a) < 1.0))
    fail(ErrorCode::InvalidArgument, "affine ratio must satisfy 0 < |a| < 1");
  return {MapKind::Affine, a, b, 1, from, to};
}

MapDescriptor MapDescriptor::continued_fraction(unsigned q, std::size_t from, std::size_t to) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "continued-fraction digit must be >= 1");
  return {MapKind::Moebius, 0.0, 0.0, q, from, to};
}

double MapDescriptor::apply(double x) const {
  if (kind == MapKind::Moebius) return 1.0 / (digit + x);
  return ratio * x + offset;
}

double MapDescriptor::derivative(double x) const {
  if (kind == MapKind::Moebius) {
    const double d = digit + x;
    return 1.0 / (d * d);
  }
  return std::abs(ratio);
}

MoebiusMatrix MapDescriptor::matrix() const {
  if (kind == MapKind::Moebius) return {0, 1, 1, static_cast<long double>(digit)};
  return {ratio, offset, 0, 1};
}

Interval MapDescriptor::image(const Interval& x) const {
  if (kind == MapKind::Moebius) return reciprocal_pos(x + static_cast<double>(digit));
  return x * ratio + offset;
}

Interval MapDescriptor::derivative_bounds(const Interval& x) const {
  if (kind == MapKind::Moebius) {
    const Interval den = x + static_cast<double>(digit);
    return reciprocal_pos(mul_nonneg(den, den));
  }
  const double a = std::abs(ratio);
  return {a, a};
}

double MapDescriptor::distortion_on(const Interval& domain) const {
  if (kind != MapKind::Moebius) return 1.0;
  return derivative(domain.lo) / derivative(domain.hi);
}

bool SystemSpec::all_constant_derivative() const {
  return std::all_of(maps.begin(), maps.end(),
                     [](const MapDescriptor& m) { return m.has_constant_derivative(); });
}

namespace {

constexpr double kContainmentSlack = 1e-12;

Interval plain_image(const MapDescriptor& m, const Interval& x) {
  const double a = m.apply(x.lo);
  const double b = m.apply(x.hi);
  return {std::min(a, b), std::max(a, b)};
}

void validate_maps(Flavor flavor, const std::vector<Interval>& vertices,
                   const std::vector<MapDescriptor>& maps) {
  if (vertices.empty()) fail(ErrorCode::InvalidArgument, "at least one vertex space is required");
  for (const auto& v : vertices)
    if (!(v.lo < v.hi)) fail(ErrorCode::InvalidArgument, "vertex spaces must be nondegenerate intervals");
  if (flavor == Flavor::Cifs && vertices.size() != 1)
    fail(ErrorCode::InvalidArgument, "a CIFS has exactly one vertex space");
  if (maps.size() < 2) fail(ErrorCode::InvalidArgument, "a system needs at least two maps");

  for (std::size_t e = 0; e < maps.size(); ++e) {
    const auto& m = maps[e];
    const std::string label = "map " + std::to_string(e);
    if (m.domain_vertex >= vertices.size() || m.range_vertex >= vertices.size())
      fail(ErrorCode::InvalidArgument, label + ": vertex index out of range");
    const Interval& dom = vertices[m.domain_vertex];
    const Interval& ran = vertices[m.range_vertex];
    switch (m.kind) {
      case MapKind::Similitude:
        if (!(m.ratio > 0.0 && m.ratio < 1.0))
          fail(ErrorCode::InvalidArgument, label + ": similitude ratio must lie in (0,1)");
        break;
      case MapKind::Affine:
        if (!(m.ratio != 0.0 && std::abs(m.ratio) < 1.0))
          fail(ErrorCode::InvalidArgument, label + ": affine ratio must satisfy 0 < |a| < 1");
        break;
      case MapKind::Moebius:
        if (m.digit < 1) fail(ErrorCode::InvalidArgument, label + ": digit must be >= 1");
        if (dom.lo < 0.0) fail(ErrorCode::InvalidArgument, label + ": Moebius branch needs a domain in [0, inf)");
        break;
    }
    const Interval img = plain_image(m, dom);
    const double slack = kContainmentSlack * std::max(1.0, ran.width());
    if (img.lo < ran.lo - slack || img.hi > ran.hi + slack)
      fail(ErrorCode::InvalidArgument, label + ": image leaves its range space");
  }
}

IncidenceMatrix default_incidence(Flavor flavor, const std::vector<MapDescriptor>& maps) {
  if (flavor == Flavor::Cifs) return IncidenceMatrix::full(maps.size());
  std::vector<std::vector<int>> rows(maps.size(), std::vector<int>(maps.size(), 0));
  for (std::size_t e = 0; e < maps.size(); ++e)
    for (std::size_t f = 0; f < maps.size(); ++f)
      rows[e][f] = maps[e].domain_vertex == maps[f].range_vertex ? 1 : 0;
  return IncidenceMatrix(std::move(rows));
}

}  // namespace

SystemSpec make_system(std::string name, Flavor flavor, std::vector<Interval> vertices,
                       std::vector<MapDescriptor> maps, std::optional<IncidenceMatrix> incidence,
                       const SystemOptions& options) {
  validate_maps(flavor, vertices, maps);
  if (options.grid_cells == 0) fail(ErrorCode::InvalidArgument, "grid_cells must be >= 1");

  SystemSpec s;
  s.name = std::move(name);
  s.flavor = flavor;
  s.vertices = std::move(vertices);
  s.maps = std::move(maps);
  s.grid_cells = options.grid_cells;
  s.incidence = incidence ? *incidence : default_incidence(flavor, s.maps);
  if (s.incidence.size() != s.maps.size())
    fail(ErrorCode::InvalidArgument, "incidence matrix size does not match the number of maps");
  if (flavor == Flavor::Cifs && !s.incidence.is_full() && s.vertices.size() != 1)
    fail(ErrorCode::InvalidArgument, "restricted incidence requires a single vertex space");
  for (std::size_t e = 0; e < s.maps.size(); ++e)
    for (std::size_t f = 0; f < s.maps.size(); ++f)
      if (s.incidence.allows(static_cast<Symbol>(e), static_cast<Symbol>(f)) &&
          s.maps[e].domain_vertex != s.maps[f].range_vertex)
        fail(ErrorCode::InvalidArgument, "incidence allows edge " + std::to_string(e) + " -> " +
                                             std::to_string(f) + " but t(e) != i(e')");

  if (options.distortion) {
    if (*options.distortion < 1.0) fail(ErrorCode::InvalidArgument, "distortion constant must be >= 1");
    s.distortion = *options.distortion;
  } else {
    s.distortion = 1.0;
    for (const auto& m : s.maps) s.distortion = std::max(s.distortion, m.distortion_on(s.space_of(m.domain_vertex)));
  }

  double one_step = 0.0;
  for (const auto& m : s.maps) {
    const Interval& dom = s.space_of(m.domain_vertex);
    one_step = std::max(one_step, std::max(m.derivative(dom.lo), m.derivative(dom.hi)));
  }
  if (one_step < 1.0) {
    s.gamma = one_step;
    s.gamma_word_length = 1;
  } else {
    double two_step = 0.0;
    for (std::size_t e = 0; e < s.maps.size(); ++e)
      for (std::size_t f = 0; f < s.maps.size(); ++f) {
        if (!s.incidence.allows(static_cast<Symbol>(e), static_cast<Symbol>(f))) continue;
        two_step = std::max(two_step, compose_geometry(s, Word{static_cast<Symbol>(e), static_cast<Symbol>(f)}).derivative_sup);
      }
    if (two_step >= 1.0) fail(ErrorCode::InvalidArgument, "system is not contracting at word length 2");
    s.gamma = two_step;
    s.gamma_word_length = 2;
  }

  const auto sep = check_separation(s);
  s.separation_ok = sep.ok;
  if (!sep.ok && !options.allow_overlap)
    fail(ErrorCode::InvalidArgument, "open set condition fails for maps " +
                                         std::to_string(sep.overlapping->first) + " and " +
                                         std::to_string(sep.overlapping->second));
  return s;
}

std::shared_ptr<const MapFamily> golden_family() {
  auto f = std::make_shared<MapFamily>();
  f->name = "golden";
  f->declared_size = std::nullopt;
  // a_i = 2^{-(i+1)} for i >= 1; image i starts at 1 - 2^{-(i-1)}.
  f->ratio = [](std::size_t k) { return std::ldexp(1.0, -static_cast<int>(k) - 2); };
  f->generator = [](std::size_t k) {
    return MapDescriptor::similitude(std::ldexp(1.0, -static_cast<int>(k) - 2),
                                     1.0 - std::ldexp(1.0, -static_cast<int>(k)));
  };
  f->distortion = 1.0;
  f->space = {0.0, 1.0};
  // sum_{i>=1} 2^{-(i+1)t} = 2^{-2t} / (1 - 2^{-t})
  f->analytic_log_sum = [](double t) {
    if (t <= 0.0) return std::numeric_limits<double>::infinity();
    return -2.0 * t * std::log(2.0) - std::log1p(-std::exp2(-t));
  };
  return f;
}

std::shared_ptr<const MapFamily> continued_fraction_family() {
  auto f = std::make_shared<MapFamily>();
  f->name = "continued-fraction";
  f->declared_size = std::nullopt;
  f->generator = [](std::size_t k) { return MapDescriptor::continued_fraction(static_cast<unsigned>(k + 1)); };
  // sup/inf of 1/(1+x)^2 on [0,1]; compositions never exceed it.
  f->distortion = 4.0;
  f->space = {0.0, 1.0};
  return f;
}

std::shared_ptr<const MapFamily> cantor_family(std::vector<double> ratios) {
  if (ratios.size() < 2) fail(ErrorCode::InvalidArgument, "cantor family needs at least two ratios");
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::InvalidArgument, "cantor ratios must lie in (0,1)");
    total += r;
  }
  if (total > 1.0 + 1e-12) fail(ErrorCode::InvalidArgument, "cantor ratios sum to more than 1 (images overlap)");
  // Equal gaps, first image flush left, last flush right.
  const double gap = ratios.size() > 1 ? std::max(0.0, 1.0 - total) / static_cast<double>(ratios.size() - 1) : 0.0;
  std::vector<double> offsets;
  double pos = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    offsets.push_back(i + 1 == ratios.size() ? 1.0 - ratios[i] : pos);
    pos += ratios[i] + gap;
  }

  auto f = std::make_shared<MapFamily>();
  std::string name = "cantor(";
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (i) name += ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", ratios[i]);
    name += buf;
  }
  f->name = name + ")";
  f->declared_size = ratios.size();
  f->ratio = [ratios](std::size_t k) { return ratios.at(k); };
  f->generator = [ratios, offsets](std::size_t k) {
    return MapDescriptor::similitude(ratios.at(k), offsets.at(k));
  };
  f->distortion = 1.0;
  f->space = {0.0, 1.0};
  f->analytic_log_sum = [ratios](double t) {
    double s = 0.0;
    for (double r : ratios) s += std::pow(r, t);
    return std::log(s);
  };
  return f;
}

SystemSpec system_from_family(std::shared_ptr<const MapFamily> family, std::size_t n,
                              const SystemOptions& options) {
  if (!family) fail(ErrorCode::InvalidArgument, "null family");
  if (n < 2) fail(ErrorCode::InvalidArgument, "a truncation needs at least two maps");
  if (family->declared_size && n > *family->declared_size)
    fail(ErrorCode::InvalidArgument, "truncation level exceeds the declared family size");
  std::vector<MapDescriptor> maps;
  maps.reserve(n);
  for (std::size_t k = 0; k < n; ++k) maps.push_back(family->generator(k));
  SystemOptions opts = options;
  if (!opts.distortion) opts.distortion = family->distortion;
  auto name = family->name + "[n=" + std::to_string(n) + "]";
  SystemSpec s = make_system(std::move(name), Flavor::Cifs, {family->space}, std::move(maps), std::nullopt, opts);
  s.family = std::move(family);
  return s;
}

SystemSpec truncate(const SystemSpec& system, std::size_t n) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "a truncation needs at least two maps");
  SystemOptions opts;
  opts.grid_cells = system.grid_cells;
  opts.distortion = system.distortion;
  opts.allow_overlap = !system.separation_ok;
  if (system.family) return system_from_family(system.family, n, opts);
  if (n > system.maps.size()) fail(ErrorCode::InvalidArgument, "truncation level exceeds the number of maps");
  std::vector<MapDescriptor> maps(system.maps.begin(), system.maps.begin() + static_cast<std::ptrdiff_t>(n));
  auto name = system.name + "[n=" + std::to_string(n) + "]";
  return make_system(std::move(name), system.flavor, system.vertices, std::move(maps),
                     system.incidence.restricted(n), opts);
}

GeometryBuilder::GeometryBuilder(const SystemSpec& system, std::size_t terminal_vertex) {
  const Interval& space = system.space_of(terminal_vertex);
  whole_ = space;
  point_ = space.mid();
  exact_ = system.all_constant_derivative();
  if (exact_) return;
  const std::size_t cells = system.grid_cells;
  cell_images_.reserve(cells);
  cell_derivatives_.assign(cells, Interval{1.0, 1.0});
  const double h = space.width() / static_cast<double>(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double lo = c == 0 ? space.lo : space.lo + h * static_cast<double>(c);
    const double hi = c + 1 == cells ? space.hi : space.lo + h * static_cast<double>(c + 1);
    cell_images_.push_back({round_down(lo), round_up(hi)});
  }
  cell_images_.front().lo = space.lo;
  cell_images_.back().hi = space.hi;
}

void GeometryBuilder::extend_front(const MapDescriptor& map) {
  point_derivative_ *= map.derivative(point_);
  point_ = map.apply(point_);
  whole_ = map.image(whole_);
  if (exact_) {
    exact_derivative_ *= std::abs(map.ratio);
    return;
  }
  for (std::size_t c = 0; c < cell_images_.size(); ++c) {
    cell_derivatives_[c] = mul_nonneg(cell_derivatives_[c], map.derivative_bounds(cell_images_[c]));
    cell_images_[c] = map.image(cell_images_[c]);
  }
}

double GeometryBuilder::derivative_sup() const {
  if (exact_) return exact_derivative_;
  double s = 0.0;
  for (const auto& d : cell_derivatives_) s = std::max(s, d.hi);
  return s;
}

double GeometryBuilder::derivative_inf() const {
  if (exact_) return exact_derivative_;
  double s = std::numeric_limits<double>::infinity();
  for (const auto& d : cell_derivatives_) s = std::min(s, d.lo);
  return s;
}

bool is_admissible(const SystemSpec& system, const Word& word) {
  return is_admissible(word, system.admissibility(), system.alphabet_size());
}

WordGeometry compose_geometry(const SystemSpec& system, const Word& word) {
  if (word.empty()) fail(ErrorCode::EmptyWord, "geometry of the empty word is not defined");
  if (!is_admissible(system, word))
    fail(ErrorCode::Inadmissible, "word " + word.to_string() + " is not admissible");
  GeometryBuilder b(system, system.maps[word.back()].domain_vertex);
  for (std::size_t i = word.size(); i-- > 0;) b.extend_front(system.maps[word[i]]);
  return {word, b.derivative_sup(), b.derivative_inf(), b.image(), b.derivative_at_reference()};
}

Interval word_image(const SystemSpec& system, const Word& word) {
  if (word.empty()) fail(ErrorCode::EmptyWord, "image of the empty word is not defined");
  MoebiusMatrix m;
  for (Symbol s : word) m = m.then_inner(system.maps.at(s).matrix());
  const Interval& space = system.space_of(system.maps[word.back()].domain_vertex);
  const double a = static_cast<double>(m.apply(space.lo));
  const double b = static_cast<double>(m.apply(space.hi));
  return {std::min(a, b), std::max(a, b)};
}

SeparationReport check_separation(const SystemSpec& system) {
  SeparationReport report;
  for (std::size_t v = 0; v < system.vertices.size(); ++v) {
    std::vector<std::pair<Interval, Symbol>> images;
    for (std::size_t e = 0; e < system.maps.size(); ++e)
      if (system.maps[e].range_vertex == v)
        images.emplace_back(word_image(system, Word{static_cast<Symbol>(e)}), static_cast<Symbol>(e));
    std::sort(images.begin(), images.end(), [](const auto& x, const auto& y) {
      return x.first.lo < y.first.lo || (x.first.lo == y.first.lo && x.second < y.second);
    });
    const double tol = 1e-12 * system.vertices[v].width();
    double reach = -std::numeric_limits<double>::infinity();
    Symbol reach_owner = 0;
    for (const auto& [img, e] : images) {
      if (img.lo < reach - tol) {
        report.ok = false;
        report.overlapping = std::minmax(reach_owner, e);
        return report;
      }
      if (img.hi > reach) {
        reach = img.hi;
        reach_owner = e;
      }
    }
  }
  return report;
}

}  // namespace confdim
