#include "confdim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confdim/error.hpp"
#include "confdim/rng.hpp"

namespace confdim {

CylinderMeasure::CylinderMeasure(std::shared_ptr<const SystemSpec> system, std::size_t depth,
                                 std::map<Word, double> masses)
    : system_(std::move(system)), depth_(depth), masses_(std::move(masses)) {
  if (!system_) fail(ErrorCode::InvalidArgument, "cylinder measure needs a system");
  if (depth_ == 0) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  for (const auto& [w, m] : masses_) {
    if (w.empty() || w.size() > depth_) fail(ErrorCode::InvalidArgument, "stored word length outside 1..depth");
    if (!(m >= 0.0)) fail(ErrorCode::InvalidArgument, "cylinder masses must be >= 0");
  }
}

CylinderMeasure CylinderMeasure::from_depth_masses(std::shared_ptr<const SystemSpec> system, std::size_t depth,
                                                   const std::map<Word, double>& depth_masses) {
  std::map<Word, double> all;
  for (const auto& [w, m] : depth_masses) {
    if (w.size() != depth) fail(ErrorCode::InvalidArgument, "depth masses must all have length depth");
    for (std::size_t len = 1; len <= depth; ++len) all[w.prefix(len)] += m;
  }
  return CylinderMeasure(std::move(system), depth, std::move(all));
}

double CylinderMeasure::stored(const Word& w) const {
  const auto it = masses_.find(w);
  return it == masses_.end() ? 0.0 : it->second;
}

double CylinderMeasure::total() const {
  double s = 0.0;
  for (Symbol e = 0; e < system_->alphabet_size(); ++e) s += stored(Word{e});
  return s;
}

bool CylinderMeasure::normalized() const { return std::abs(total() - 1.0) <= 1e-12; }

double CylinderMeasure::conditional(const Word& prefix, Symbol e) const {
  if (e >= system_->alphabet_size()) return 0.0;
  if (prefix.empty() || (depth_ == 1 && prefix.size() >= 1)) {
    const double t = total();
    return t > 0.0 ? stored(Word{e}) / t : 0.0;
  }
  const Word context = prefix.size() < depth_ ? prefix : prefix.suffix_from(prefix.size() - (depth_ - 1));
  const double denom = stored(context);
  return denom > 0.0 ? stored(context.appended(e)) / denom : 0.0;
}

double CylinderMeasure::mass(const Word& w) const {
  if (w.empty()) return total();
  for (Symbol s : w)
    if (s >= system_->alphabet_size()) return 0.0;
  if (w.size() <= depth_) return stored(w);
  double m = stored(w.prefix(depth_));
  for (std::size_t i = depth_; i < w.size() && m > 0.0; ++i) m *= conditional(w.prefix(i), w[i]);
  return m;
}

double CylinderMeasure::additivity_error() const {
  double worst = 0.0;
  for (const auto& [w, m] : masses_) {
    if (w.size() >= depth_) continue;
    double children = 0.0;
    for (Symbol e = 0; e < system_->alphabet_size(); ++e) children += stored(w.appended(e));
    worst = std::max(worst, std::abs(m - children));
  }
  return worst;
}

CylinderMeasure conformal_cylinder_measure(const SystemSpec& system, double h, std::size_t depth) {
  if (!(h >= 0.0 && h <= 1.0)) fail(ErrorCode::InvalidArgument, "conformal exponent h must lie in [0, 1]");
  if (depth == 0) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  std::vector<std::pair<Word, double>> logs;
  double top = -std::numeric_limits<double>::infinity();
  for (const Word& w : enumerate_admissible(system.admissibility(), system.alphabet_size(), depth)) {
    const double l = h * std::log(compose_geometry(system, w).derivative_sup);
    top = std::max(top, l);
    logs.emplace_back(w, l);
  }
  if (logs.empty()) fail(ErrorCode::EmptyAdmissibleSet, "no admissible words");
  double z = 0.0;
  for (const auto& [w, l] : logs) z += std::exp(l - top);
  std::map<Word, double> depth_masses;
  for (const auto& [w, l] : logs) depth_masses.emplace(w, std::exp(l - top) / z);
  return CylinderMeasure::from_depth_masses(std::make_shared<const SystemSpec>(system), depth, depth_masses);
}

double family_cylinder_mass(const MapFamily& family, double h, const Word& w) {
  if (!family.ratio) fail(ErrorCode::Unsupported, "family " + family.name + " has no closed-form ratios");
  if (family.declared_size)
    for (Symbol s : w)
      if (s >= *family.declared_size) return 0.0;
  double m = 1.0;
  for (Symbol s : w) m *= std::pow(family.ratio(s), h);
  return m;
}

double setwise_discrepancy(const CylinderMassFn& m1, const CylinderMassFn& m2, std::size_t alphabet,
                           std::size_t depth) {
  double worst = 0.0;
  for (std::size_t d = 1; d <= depth; ++d)
    for (const Word& w : enumerate_admissible(std::nullopt, alphabet, d)) worst = std::max(worst, std::abs(m1(w) - m2(w)));
  return worst;
}

LineMeasure mass_distribution_sequence(const SystemSpec& system, double h, std::size_t n) {
  if (!system.all_constant_derivative())
    fail(ErrorCode::Unsupported, "mass distributions are defined for similitude systems only");
  if (n == 0) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  std::vector<Piece> pieces;
  double total = 0.0;
  for (const Word& w : enumerate_admissible(system.admissibility(), system.alphabet_size(), n)) {
    double m = 1.0;
    for (Symbol s : w) m *= std::pow(std::abs(system.maps[s].ratio), h);
    const Interval img = word_image(system, w);
    pieces.push_back({img.lo, img.hi, m});  // density filled in below
    total += m;
  }
  for (auto& p : pieces) p.density = p.density / total / (p.hi - p.lo);
  return LineMeasure({}, std::move(pieces));
}

namespace {

constexpr double kTinyLength = 1e-300;

SystemSpec cantor_third() { return system_from_family(cantor_family({1.0 / 3.0, 1.0 / 3.0}), 2); }

double cantor_third_h() { return std::log(2.0) / std::log(3.0); }

std::size_t exm37_max_index(double a) {
  // largest I with a^{(I+1)^2} still a normal positive double above 1e-300
  std::size_t i = 0;
  while (std::pow(a, static_cast<double>((i + 2) * (i + 2))) >= kTinyLength) ++i;
  return i;
}

void check_a(double a) {
  if (!(a > 0.0 && a < 1.0)) fail(ErrorCode::InvalidArgument, "parameter a must lie in (0, 1)");
}

Piece exm37_piece(double a, std::size_t i, double mass) {
  const double hi = std::pow(a, static_cast<double>(i * i));
  const double lo = std::pow(a, static_cast<double>((i + 1) * (i + 1)));
  return {lo, hi, mass / (hi - lo)};
}

}  // namespace

std::vector<GalleryInfo> gallery_list() {
  return {
      {"exm3.1", "n L|[0,1/n] for odd n, delta_{1/n} for even n; weak limit delta_0", false},
      {"exm3.3", "canonical mass distributions of the (1/3,1/3) Cantor system; limit is the conformal measure", false},
      {"exm3.4", "(1/n) sum_{i=1..n} delta_{i/n}; weak limit Lebesgue on [0,1]", false},
      {"exm3.5", "(1/n) delta_0 + L|[1/n,1]; TV limit Lebesgue on [0,1]", false},
      {"exm3.6", "((n-1)/n) delta_0 + (1/n) L|[1,2]; TV limit delta_0", false},
      {"exm3.7", "normalised sums of a^i-weighted uniform pieces on [a^{(i+1)^2}, a^{i^2}], i <= n", true},
  };
}

LineMeasure gallery_member(const std::string& name, std::size_t n, double a) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "gallery index n must be >= 1");
  const double dn = static_cast<double>(n);
  if (name == "exm3.1") {
    if (n % 2 == 1) return LineMeasure::uniform(0.0, 1.0 / dn);
    return LineMeasure::dirac(1.0 / dn);
  }
  if (name == "exm3.3") {
    if (n > 20) fail(ErrorCode::InvalidArgument, "exm3.3 is limited to n <= 20");
    return mass_distribution_sequence(cantor_third(), cantor_third_h(), n);
  }
  if (name == "exm3.4") {
    std::vector<Atom> atoms;
    for (std::size_t i = 1; i <= n; ++i) atoms.push_back({static_cast<double>(i) / dn, 1.0 / dn});
    return LineMeasure(std::move(atoms), {});
  }
  if (name == "exm3.5") {
    std::vector<Piece> pieces;
    if (n > 1) pieces.push_back({1.0 / dn, 1.0, 1.0});
    return LineMeasure({{0.0, 1.0 / dn}}, std::move(pieces));
  }
  if (name == "exm3.6") return LineMeasure({{0.0, (dn - 1.0) / dn}}, {{1.0, 2.0, 1.0 / dn}});
  if (name == "exm3.7") {
    check_a(a);
    if (n > exm37_max_index(a)) fail(ErrorCode::InvalidArgument, "exm3.7 index too large for double precision");
    const double norm = (1.0 - a) / (1.0 - std::pow(a, dn + 1.0));
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i <= n; ++i) pieces.push_back(exm37_piece(a, i, norm * std::pow(a, static_cast<double>(i))));
    return LineMeasure({}, std::move(pieces));
  }
  fail(ErrorCode::UnknownName, "unknown gallery sequence '" + name + "'");
}

GalleryLimit gallery_limit(const std::string& name, double a) {
  if (name == "exm3.1" || name == "exm3.6") return {LineMeasure::dirac(0.0), true, ""};
  if (name == "exm3.4" || name == "exm3.5") return {LineMeasure::uniform(0.0, 1.0), true, ""};
  if (name == "exm3.3")
    return {mass_distribution_sequence(cantor_third(), cantor_third_h(), 14), false,
            "conformal measure approximated by the depth-14 mass distribution"};
  if (name == "exm3.7") {
    check_a(a);
    const std::size_t last = exm37_max_index(a);
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i <= last; ++i) pieces.push_back(exm37_piece(a, i, (1.0 - a) * std::pow(a, static_cast<double>(i))));
    // Pieces beyond `last` are below double resolution; their total mass
    // a^{last+1} sits uniformly on [0, a^{(last+1)^2}].
    const double edge = std::pow(a, static_cast<double>((last + 1) * (last + 1)));
    pieces.push_back({0.0, edge, std::pow(a, static_cast<double>(last + 1)) / edge});
    return {LineMeasure({}, std::move(pieces)), true,
            "pieces with index > " + std::to_string(last) + " merged into [0, a^{(I+1)^2}]"};
  }
  fail(ErrorCode::UnknownName, "unknown gallery sequence '" + name + "'");
}

GallerySequence gallery(const std::string& name, std::size_t n_max, double a) {
  GallerySequence seq;
  seq.name = name;
  seq.limit = gallery_limit(name, a);
  for (std::size_t n = 1; n <= n_max; ++n) seq.members.push_back(gallery_member(name, n, a));
  return seq;
}

double truncation_singularity(const MapFamily& family, std::size_t n1, std::size_t n2, double h_n2, std::size_t depth) {
  if (!family.ratio) fail(ErrorCode::Unsupported, "family " + family.name + " has no closed-form ratios");
  if (n1 == 0 || n1 > n2) fail(ErrorCode::InvalidArgument, "need 1 <= n1 <= n2");
  if (n1 == n2 || depth == 0) return 1.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n1; ++i) q += std::pow(family.ratio(i), h_n2);
  return std::pow(q, static_cast<double>(depth));
}

double truncation_tv_lower_bound(const MapFamily& family, std::size_t n1, std::size_t n2, double h_n2,
                                 std::size_t depth) {
  return 1.0 - truncation_singularity(family, n1, n2, h_n2, depth);
}

SampleCloud sample(const LineMeasure& measure, std::size_t count, std::uint64_t seed, std::string source) {
  SampleCloud cloud;
  cloud.seed = seed;
  cloud.source = std::move(source);
  if (count == 0) return cloud;
  if (std::abs(measure.total_mass() - 1.0) > 1e-9) fail(ErrorCode::InvalidArgument, "sampling needs a probability measure");
  const CounterRng rng(seed);
  cloud.points.resize(count);
  for (std::size_t i = 0; i < count; ++i) cloud.points[i] = measure.quantile(rng.uniform(i));
  return cloud;
}

namespace {

constexpr std::size_t kMaxSampleDepth = 200;

// Draws symbols until `stop(word, image)` holds.
template <class Stop>
Word draw_word(const CylinderMeasure& measure, const CounterRng& rng, Stop&& stop, Interval& image) {
  const SystemSpec& s = measure.system();
  Word w;
  MoebiusMatrix m;
  std::uint64_t counter = 0;
  while (true) {
    const double u = rng.uniform(counter++);
    double acc = 0.0;
    Symbol chosen = static_cast<Symbol>(s.alphabet_size());
    Symbol last_positive = chosen;
    for (Symbol e = 0; e < s.alphabet_size(); ++e) {
      const double p = measure.conditional(w, e);
      if (p <= 0.0) continue;
      last_positive = e;
      acc += p;
      if (u < acc) {
        chosen = e;
        break;
      }
    }
    if (chosen == s.alphabet_size()) chosen = last_positive;  // rounding in the cumulative sum
    if (chosen == s.alphabet_size()) fail(ErrorCode::DegenerateSystem, "no admissible continuation of " + w.to_string());
    w = w.appended(chosen);
    m = m.then_inner(s.maps[chosen].matrix());
    const Interval& space = s.space_of(s.maps[chosen].domain_vertex);
    const double a = static_cast<double>(m.apply(space.lo));
    const double b = static_cast<double>(m.apply(space.hi));
    image = {std::min(a, b), std::max(a, b)};
    if (stop(w, image)) return w;
  }
}

void check_normalized(const CylinderMeasure& measure) {
  if (!measure.normalized()) fail(ErrorCode::InvalidArgument, "sampling needs a normalised cylinder measure");
}

}  // namespace

SampleCloud sample(const CylinderMeasure& measure, std::size_t count, std::uint64_t seed, double resolution,
                   std::string source) {
  SampleCloud cloud;
  cloud.seed = seed;
  cloud.source = std::move(source);
  if (count == 0) return cloud;
  check_normalized(measure);
  if (!(resolution > 0.0)) fail(ErrorCode::InvalidArgument, "resolution must be positive");
  const CounterRng base(seed);
  cloud.points.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    Interval image;
    draw_word(measure, base.substream(i),
              [&](const Word& w, const Interval& img) { return img.width() < resolution || w.size() >= kMaxSampleDepth; },
              image);
    cloud.points[i] = image.mid();
  }
  return cloud;
}

std::vector<Word> sample_words(const CylinderMeasure& measure, std::size_t count, std::uint64_t seed,
                               std::size_t length) {
  if (length == 0) fail(ErrorCode::InvalidArgument, "word length must be >= 1");
  std::vector<Word> out;
  if (count == 0) return out;
  check_normalized(measure);
  const CounterRng base(seed);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Interval image;
    out.push_back(draw_word(measure, base.substream(i), [&](const Word& w, const Interval&) { return w.size() >= length; },
                            image));
  }
  return out;
}

}  // namespace confdim
