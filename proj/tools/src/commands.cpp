#include "commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "confdim/dimension.hpp"
#include "confdim/error.hpp"
#include "confdim/export.hpp"
#include "confdim/measures.hpp"
#include "confdim/pressure.hpp"
#include "confdim/transfer.hpp"

namespace confdim::cli {

using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kSystemKeys = {"system.family", "system.n",        "system.ratios",
                                              "system.maps",   "system.space",    "system.vertices",
                                              "system.incidence", "system.allow_overlap", "system.grid_cells"};

std::vector<std::string> with_system_keys(std::vector<std::string> keys) {
  keys.insert(keys.end(), kSystemKeys.begin(), kSystemKeys.end());
  return keys;
}

std::string num(double x) { return format_number(x); }

class Csv {
 public:
  explicit Csv(std::vector<std::string> columns) { line(columns); }

  void row(const std::vector<std::string>& cells) { line(cells); }
  Table table(std::string name) const { return {std::move(name), text_}; }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  std::string text_;
};

ordered_json header(const std::string& command, const Config& config) {
  ordered_json j;
  j["command"] = command;
  j["config_hash"] = config.hash();
  j["seed"] = config.has("sample.seed") ? ordered_json(config.get_string("sample.seed")) : ordered_json(nullptr);
  ordered_json echo = ordered_json::object();
  for (const auto& [k, v] : config.values()) echo[k] = v;
  j["config"] = echo;
  return j;
}

// --- system construction -------------------------------------------------

Interval parse_interval(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string a, b, extra;
  if (!(in >> a >> b) || (in >> extra)) throw ConfigError(key, "expected 'lo hi', got '" + text + "'");
  const Interval i{parse_real(a, key), parse_real(b, key)};
  if (!(i.lo < i.hi)) throw ConfigError(key, "interval needs lo < hi");
  return i;
}

std::vector<MapDescriptor> parse_maps(const std::string& text, const std::string& key) {
  std::vector<MapDescriptor> maps;
  for (const auto& item : split(text, ';')) {
    std::istringstream in(item);
    std::vector<std::string> tok;
    for (std::string t; in >> t;) tok.push_back(t);
    if (tok.empty()) throw ConfigError(key, "empty map entry");
    auto vertex = [&](std::size_t i) -> std::size_t {
      const double v = parse_real(tok[i], key);
      if (!(v >= 0.0 && v < 64.0 && v == std::floor(v))) throw ConfigError(key, "vertex index must be an integer in [0, 64)");
      return static_cast<std::size_t>(v);
    };
    const std::string& kind = tok[0];
    if (kind == "similitude" || kind == "affine") {
      if (tok.size() != 3 && tok.size() != 5) throw ConfigError(key, "'" + item + "': expected '" + kind + " a b [from to]'");
      const double a = parse_real(tok[1], key), b = parse_real(tok[2], key);
      const std::size_t from = tok.size() == 5 ? vertex(3) : 0, to = tok.size() == 5 ? vertex(4) : 0;
      maps.push_back(kind == "similitude" ? MapDescriptor::similitude(a, b, from, to) : MapDescriptor::affine(a, b, from, to));
    } else if (kind == "moebius") {
      if (tok.size() != 2 && tok.size() != 4) throw ConfigError(key, "'" + item + "': expected 'moebius q [from to]'");
      const double q = parse_real(tok[1], key);
      if (!(q >= 1.0 && q <= 1e6 && q == std::floor(q))) throw ConfigError(key, "moebius digit q must be an integer >= 1");
      const std::size_t from = tok.size() == 4 ? vertex(2) : 0, to = tok.size() == 4 ? vertex(3) : 0;
      maps.push_back(MapDescriptor::continued_fraction(static_cast<unsigned>(q), from, to));
    } else {
      throw ConfigError(key, "unknown map kind '" + kind + "' (similitude, affine, moebius)");
    }
  }
  return maps;
}

IncidenceMatrix parse_incidence(const std::string& text, const std::string& key) {
  std::vector<std::vector<int>> rows;
  for (const auto& r : split(text, ';')) {
    std::istringstream in(r);
    std::vector<int> row;
    for (std::string t; in >> t;) {
      if (t != "0" && t != "1") throw ConfigError(key, "entries must be 0 or 1");
      row.push_back(t == "1");
    }
    rows.push_back(std::move(row));
  }
  for (const auto& r : rows)
    if (r.size() != rows.size()) throw ConfigError(key, "incidence matrix must be square");
  return IncidenceMatrix(std::move(rows));
}

// Library validation failures during construction are configuration errors.
template <class F>
auto as_config(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
}

bool is_family_name(const std::string& f) { return f == "golden" || f == "continued-fraction" || f == "cantor"; }

}  // namespace

SystemSource build_system(const Config& config) {
  SystemSource src;
  src.kind = config.get_string("system.family");
  SystemOptions opts;
  opts.allow_overlap = config.get_bool("system.allow_overlap", false);
  opts.grid_cells = config.get_count("system.grid_cells", 1, 4096, 64);

  if (is_family_name(src.kind)) {
    for (const char* k : {"system.maps", "system.space", "system.vertices", "system.incidence"})
      if (config.has(k)) throw ConfigError(k, "not used with system.family = " + src.kind);
  }
  if (src.kind == "golden" || src.kind == "continued-fraction") {
    if (config.has("system.ratios")) throw ConfigError("system.ratios", "not used with system.family = " + src.kind);
    src.family = src.kind == "golden" ? golden_family() : continued_fraction_family();
    if (config.has("system.n")) {
      const std::size_t n = config.get_count("system.n", 2, 100000);
      src.system = as_config("system.n", [&] { return system_from_family(src.family, n, opts); });
    }
    return src;
  }
  if (src.kind == "cantor") {
    if (config.has("system.n")) throw ConfigError("system.n", "a cantor family is finite; list its ratios instead");
    const auto ratios = config.get_reals("system.ratios");
    src.family = as_config("system.ratios", [&] { return cantor_family(ratios); });
    src.system = as_config("system.ratios", [&] { return system_from_family(src.family, ratios.size(), opts); });
    return src;
  }
  if (src.kind == "custom" || src.kind == "gdms") {
    if (config.has("system.ratios")) throw ConfigError("system.ratios", "use system.maps for custom systems");
    if (config.has("system.n")) throw ConfigError("system.n", "use system.maps for custom systems");
    const auto maps = as_config("system.maps", [&] { return parse_maps(config.get_string("system.maps"), "system.maps"); });
    std::vector<Interval> vertices;
    std::optional<IncidenceMatrix> incidence;
    if (src.kind == "custom") {
      if (config.has("system.vertices")) throw ConfigError("system.vertices", "custom systems have one space; use system.space");
      if (config.has("system.incidence")) throw ConfigError("system.incidence", "custom systems are full shifts; use system.family = gdms");
      vertices.push_back(parse_interval(config.get_string("system.space", "0 1"), "system.space"));
    } else {
      if (config.has("system.space")) throw ConfigError("system.space", "gdms vertex spaces go in system.vertices");
      for (const auto& v : split(config.get_string("system.vertices", "0 1"), ';'))
        vertices.push_back(parse_interval(v, "system.vertices"));
      if (config.has("system.incidence")) incidence = parse_incidence(config.get_string("system.incidence"), "system.incidence");
    }
    const Flavor flavor = src.kind == "custom" ? Flavor::Cifs : Flavor::Gdms;
    src.system = as_config("system.maps", [&] {
      return make_system(src.kind, flavor, std::move(vertices), maps, std::move(incidence), opts);
    });
    return src;
  }
  throw ConfigError("system.family", "unknown family '" + src.kind + "' (golden, cantor, continued-fraction, custom, gdms)");
}

namespace {

ordered_json system_json(const SystemSource& src) {
  ordered_json j;
  j["family"] = src.kind;
  if (src.system) {
    const SystemSpec& s = *src.system;
    j["name"] = s.name;
    j["flavor"] = s.flavor == Flavor::Cifs ? "CIFS" : "GDMS";
    j["alphabet"] = s.alphabet_size();
    j["full_shift"] = s.full_shift();
    j["distortion"] = s.distortion;
    j["gamma"] = s.gamma;
    j["gamma_word_length"] = s.gamma_word_length;
    j["separation_ok"] = s.separation_ok;
  } else {
    j["name"] = src.family->name;
    j["alphabet"] = "infinite";
  }
  return j;
}

const SystemSpec& require_finite(const SystemSource& src) {
  if (!src.system) throw ConfigError("system.n", "this command needs a finite system; set a truncation level");
  return *src.system;
}

ordered_json bowen_json(const BowenSolution& sol) {
  ordered_json j;
  j["h"] = sol.h;
  j["bracket"] = {sol.bracket.lo, sol.bracket.hi};
  j["residual"] = sol.residual;
  j["depth"] = sol.depth;
  j["regular"] = sol.regular;
  j["analytic"] = sol.analytic;
  j["iterations"] = sol.iterations;
  if (sol.at_root) {
    const auto& p = *sol.at_root;
    j["pressure_at_root"] = {{"lower", p.lower}, {"upper", p.upper}, {"refined", p.refined},
                             {"bdp_gap", p.bdp_gap}, {"exact", p.exact}};
  } else {
    j["pressure_at_root"] = nullptr;
  }
  j["note"] = sol.note;
  return j;
}

double bowen_tol(const Config& config, const std::string& key, const SystemSpec* system) {
  const double fallback = system ? default_bowen_tol(*system) : 1e-12;
  return config.get_real_in(key, 1e-15, 1e-1, fallback);
}

std::string gallery_name(const Config& config) {
  const std::string name = config.get_string("gallery.name");
  for (const auto& g : gallery_list())
    if (g.name == name) return name;
  throw ConfigError("gallery.name", "unknown gallery sequence '" + name + "' (see gallery-list)");
}

double gallery_a(const Config& config, const std::string& name) {
  if (name != "exm3.7" && config.has("gallery.a")) throw ConfigError("gallery.a", "only exm3.7 takes a parameter");
  const double a = config.get_real("gallery.a", 0.5);
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("gallery.a", "a must lie in (0, 1)");
  return a;
}

}  // namespace

// --- bowen ------------------------------------------------------------------

Report cmd_bowen(const Config& config) {
  config.check_keys(with_system_keys({"bowen.depth", "bowen.tol"}));
  const SystemSource src = build_system(config);
  const SystemSpec* system = src.system ? &*src.system : nullptr;
  if (!system && !src.family->analytic_log_sum)
    throw ConfigError("system.n", "family " + src.family->name + " has no closed-form pressure; set a truncation level");
  const std::size_t depth = config.get_count("bowen.depth", 1, 40, 10);
  const double tol = bowen_tol(config, "bowen.tol", system);

  const BowenSolution sol = system ? bowen_solve(*system, depth, tol) : bowen_solve_analytic(*src.family, tol);

  Report r;
  r.command = "bowen";
  r.body = header("bowen", config);
  r.body["system"] = system_json(src);
  r.body["result"] = bowen_json(sol);
  r.body["result"]["tolerance"] = tol;
  Csv csv({"h", "t_lo", "t_hi", "residual", "depth", "regular", "pressure_lower", "pressure_upper"});
  csv.row({num(sol.h), num(sol.bracket.lo), num(sol.bracket.hi), num(sol.residual), std::to_string(sol.depth),
           sol.regular ? "1" : "0", sol.at_root ? num(sol.at_root->lower) : "", sol.at_root ? num(sol.at_root->upper) : ""});
  r.tables.push_back(csv.table("bowen"));
  if (!sol.regular) r.exit_code = kIrregular;
  return r;
}

// --- scan -------------------------------------------------------------------

Report cmd_scan(const Config& config) {
  config.check_keys(with_system_keys({"scan.n_lo", "scan.n_hi", "scan.depth", "scan.tol"}));
  if (config.has("system.n")) throw ConfigError("system.n", "scan takes its range from scan.n_lo and scan.n_hi");
  const SystemSource src = build_system(config);
  if (!is_family_name(src.kind) || src.kind == "cantor")
    throw ConfigError("system.family", "scan needs an infinite family (golden or continued-fraction)");
  const std::size_t n_lo = config.get_count("scan.n_lo", 2, 100000, 2);
  const std::size_t n_hi = config.get_count("scan.n_hi", 2, 100000, 10);
  if (n_hi < n_lo) throw ConfigError("scan.n_hi", "scan range is reversed (n_hi < n_lo)");
  const std::size_t depth = config.get_count("scan.depth", 1, 40, 8);
  const double tol = config.get_real_in("scan.tol", 1e-15, 1e-1, src.family->analytic_log_sum ? 1e-10 : 1e-6);
  SystemOptions opts;
  opts.grid_cells = config.get_count("system.grid_cells", 1, 4096, 64);

  const ScanResult scan = truncation_scan(src.family, n_lo, n_hi, depth, tol, opts);

  Report r;
  r.command = "scan";
  r.body = header("scan", config);
  r.body["system"] = system_json(src);
  ordered_json rows = ordered_json::array();
  Csv csv({"n", "h_n", "residual", "depth", "regular", "t_lo", "t_hi", "error"});
  bool irregular = false;
  for (const auto& row : scan.rows) {
    ordered_json j;
    j["n"] = row.n;
    j["h"] = row.solution.h;
    j["bracket"] = {row.solution.bracket.lo, row.solution.bracket.hi};
    j["residual"] = row.solution.residual;
    j["regular"] = row.solution.regular;
    j["error"] = row.error;
    rows.push_back(j);
    irregular = irregular || !row.error.empty();
    csv.row({std::to_string(row.n), num(row.solution.h), num(row.solution.residual), std::to_string(depth),
             row.solution.regular ? "1" : "0", num(row.solution.bracket.lo), num(row.solution.bracket.hi),
             row.error.empty() ? "" : "\"" + row.error + "\""});
  }
  r.body["result"] = {{"rows", rows},
                      {"monotone", scan.monotone},
                      {"limit", scan.limit ? ordered_json(*scan.limit) : ordered_json(nullptr)},
                      {"tolerance", tol}};
  if (scan.limit && !scan.rows.empty()) r.body["result"]["final_gap"] = *scan.limit - scan.rows.back().solution.h;
  r.tables.push_back(csv.table("scan"));
  if (irregular) r.exit_code = kIrregular;
  return r;
}

// --- converge ---------------------------------------------------------------

namespace {

std::vector<std::size_t> parse_depths(const Config& config, const std::string& key, const std::string& fallback) {
  std::vector<std::size_t> out;
  for (const auto& part : split(config.get_string(key, fallback), ',')) {
    const double v = parse_real(part, key);
    if (!(v >= 1.0 && v <= 100000.0 && v == std::floor(v))) throw ConfigError(key, "depths must be integers in [1, 100000]");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// Setwise test family: a grid of cells plus the atom locations of both measures.
std::vector<TestSet> gallery_test_family(const LineMeasure& a, const LineMeasure& b, std::size_t cells) {
  const Interval ha = a.support_hull(), hb = b.support_hull();
  std::vector<TestSet> family = interval_grid(std::min(ha.lo, hb.lo), std::max(ha.hi, hb.hi), cells);
  for (const LineMeasure* m : {&a, &b}) {
    if (m->atoms().empty()) continue;
    TestSet points;
    for (const auto& at : m->atoms()) points.push_back({at.x, at.x});
    family.push_back(std::move(points));
  }
  return family;
}

}  // namespace

Report cmd_converge(const Config& config) {
  Report r;
  r.command = "converge";
  r.body = header("converge", config);

  if (config.has("gallery.name")) {
    config.check_keys({"gallery.name", "gallery.a", "converge.n_lo", "converge.n_hi", "converge.moments", "converge.grid"});
    const std::string name = gallery_name(config);
    const double a = gallery_a(config, name);
    const std::size_t n_lo = config.get_count("converge.n_lo", 1, 100000, 1);
    const std::size_t n_hi = config.get_count("converge.n_hi", 1, 100000, 10);
    if (n_hi < n_lo) throw ConfigError("converge.n_hi", "range is reversed (n_hi < n_lo)");
    if (name == "exm3.3" && n_hi > 12) throw ConfigError("converge.n_hi", "exm3.3 members are limited to n <= 12");
    const unsigned moments = static_cast<unsigned>(config.get_count("converge.moments", 1, 64, 8));
    const std::size_t cells = config.get_count("converge.grid", 1, 100000, 16);
    if (name == "exm3.7") as_config("converge.n_hi", [&] { return gallery_member(name, n_hi, a); });

    const GalleryLimit limit = gallery_limit(name, a);
    ordered_json rows = ordered_json::array();
    Csv csv({"n", "tv", "setwise", "weak"});
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      const LineMeasure m = gallery_member(name, n, a);
      const double tv = tv_distance(m, limit.measure);
      const double sw = setwise_discrepancy(m, limit.measure, gallery_test_family(m, limit.measure, cells));
      const double weak = weak_discrepancy(m, limit.measure, moments);
      rows.push_back({{"n", n}, {"tv", tv}, {"setwise", sw}, {"weak", weak}});
      csv.row({std::to_string(n), num(tv), num(sw), num(weak)});
    }
    r.body["source"] = {{"gallery", name}, {"a", name == "exm3.7" ? ordered_json(a) : ordered_json(nullptr)}};
    r.body["result"] = {{"rows", rows},
                        {"limit_exact", limit.exact},
                        {"limit_note", limit.note},
                        {"setwise_family", "grid of " + std::to_string(cells) + " cells plus atom sets"},
                        {"weak_dictionary", "1, x^j, cos 2 pi j x, sin 2 pi j x for j <= " + std::to_string(moments)}};
    r.tables.push_back(csv.table("converge"));
    return r;
  }

  config.check_keys(with_system_keys({"converge.n_lo", "converge.n_hi", "converge.depth", "converge.tv_depths"}));
  if (config.has("system.n")) throw ConfigError("system.n", "converge takes its range from converge.n_lo and converge.n_hi");
  const SystemSource src = build_system(config);
  if (!src.family->ratio || !src.family->analytic_log_sum || src.family->declared_size)
    throw ConfigError("system.family", "converge needs an infinite similitude family (golden) or gallery.name");
  const std::size_t n_lo = config.get_count("converge.n_lo", 2, 64, 2);
  const std::size_t n_hi = config.get_count("converge.n_hi", 2, 64, 10);
  if (n_hi < n_lo) throw ConfigError("converge.n_hi", "range is reversed (n_hi < n_lo)");
  const std::size_t depth = config.get_count("converge.depth", 1, 6, 3);
  if (std::pow(static_cast<double>(n_hi), static_cast<double>(depth)) > 2e7)
    throw ConfigError("converge.depth", "n_hi^depth cylinders is too many to enumerate");
  const auto tv_depths = parse_depths(config, "converge.tv_depths", "1,10,50,100,200");

  const MapFamily& fam = *src.family;
  const double h = bowen_solve_analytic(fam, 1e-13).h;
  auto limit_mass = [&](const Word& w) { return family_cylinder_mass(fam, h, w); };

  ordered_json rows = ordered_json::array();
  std::vector<std::string> cols{"n", "h_n"};
  for (std::size_t d = 1; d <= depth; ++d) cols.push_back("setwise_d" + std::to_string(d));
  Csv setwise(cols);
  std::vector<double> hs;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    const SystemSpec s = system_from_family(src.family, n);
    const double hn = bowen_solve(s, 1, 1e-13).h;
    hs.push_back(hn);
    auto trunc_mass = [&](const Word& w) {
      for (Symbol x : w)
        if (x >= n) return 0.0;
      return family_cylinder_mass(fam, hn, w);
    };
    ordered_json row{{"n", n}, {"h_n", hn}};
    std::vector<std::string> cells{std::to_string(n), num(hn)};
    ordered_json per_depth = ordered_json::array();
    for (std::size_t d = 1; d <= depth; ++d) {
      // Words over n + 1 symbols: among cylinders through excluded symbols
      // (m_n-mass 0) the heaviest use symbol n.
      double worst = 0.0;
      for (const Word& w : enumerate_admissible(std::nullopt, n + 1, d))
        worst = std::max(worst, std::abs(trunc_mass(w) - limit_mass(w)));
      per_depth.push_back(worst);
      cells.push_back(num(worst));
    }
    row["setwise"] = per_depth;
    rows.push_back(row);
    setwise.row(cells);
  }

  std::vector<std::string> tv_cols{"D"};
  for (std::size_t n = n_lo; n <= n_hi; ++n) tv_cols.push_back("n" + std::to_string(n));
  Csv tv(tv_cols);
  ordered_json tv_rows = ordered_json::array();
  for (std::size_t d : tv_depths) {
    std::vector<std::string> cells{std::to_string(d)};
    ordered_json bounds = ordered_json::array();
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      // m gives the depth-D cylinders over the first n symbols mass q^D while
      // m_n gives them mass 1.
      const double b = truncation_tv_lower_bound(fam, n, std::numeric_limits<std::size_t>::max(), h, d);
      bounds.push_back(b);
      cells.push_back(num(b));
    }
    tv_rows.push_back({{"D", d}, {"bounds", bounds}});
    tv.row(cells);
  }
  r.body["system"] = system_json(src);
  r.body["result"] = {{"h", h}, {"setwise", rows}, {"tv_lower", tv_rows}};
  r.tables.push_back(setwise.table("setwise"));
  r.tables.push_back(tv.table("tv_lower"));
  return r;
}

// --- dimension --------------------------------------------------------------

namespace {

struct DimensionSettings {
  std::size_t count = 10000;
  std::uint64_t seed = 0;
  RadiusGrid grid;
  std::optional<Interval> fit;
  std::vector<double> density_radii;
  std::size_t density_points = 1000;
  double band = 0.05;
  double q = 0.05;
  std::vector<double> flatness_radii;
};

DimensionSettings dimension_settings(const Config& config) {
  DimensionSettings s;
  s.count = config.get_count("sample.count", 100, 10000000, 10000);
  s.seed = config.get_seed("sample.seed");
  s.grid.r_min = config.get_real_in("correlation.r_min", 1e-300, 1.0, 1e-3);
  s.grid.r_max = config.get_real_in("correlation.r_max", 1e-300, 10.0, 1e-1);
  if (!(s.grid.r_min < s.grid.r_max)) throw ConfigError("correlation.r_max", "needs correlation.r_min < correlation.r_max");
  s.grid.count = config.get_count("correlation.count", 2, 10000, 20);
  if (config.has("correlation.fit_lo") || config.has("correlation.fit_hi")) {
    const Interval fit{config.get_real_in("correlation.fit_lo", 1e-300, 10.0, s.grid.r_min),
                       config.get_real_in("correlation.fit_hi", 1e-300, 10.0, s.grid.r_max)};
    if (!(fit.lo < fit.hi)) throw ConfigError("correlation.fit_hi", "fit window needs fit_lo < fit_hi");
    s.fit = fit;
  }
  const double d_min = config.get_real_in("density.r_min", 1e-300, 0.5, 1e-4);
  const double d_max = config.get_real_in("density.r_max", 1e-300, 0.5, 0.0625);
  if (!(d_min <= d_max)) throw ConfigError("density.r_max", "needs density.r_min <= density.r_max");
  s.density_radii = dyadic_radii(d_min, d_max);
  s.density_points = config.get_count("density.points", 1, 1000000, 1000);
  s.band = config.get_real_in("young.band", 0.0, 10.0, 0.05);
  s.q = config.get_real_in("eq15.q", 0.0, 0.5, 0.05);
  const double f_min = config.get_real_in("flatness.r_min", 1e-300, 0.5, 1e-60);
  const double f_max = config.get_real_in("flatness.r_max", 1e-300, 0.5, 0.25);
  if (!(f_min <= f_max)) throw ConfigError("flatness.r_max", "needs flatness.r_min <= flatness.r_max");
  s.flatness_radii = dyadic_radii(f_min, f_max);
  return s;
}

const std::vector<std::string> kDimensionKeys = {
    "sample.count",  "sample.seed",    "correlation.r_min", "correlation.r_max", "correlation.count",
    "correlation.fit_lo", "correlation.fit_hi", "density.r_min", "density.r_max", "density.points",
    "young.band",    "eq15.q",         "flatness.r_min",    "flatness.r_max",    "dimension.tolerance"};

struct Estimates {
  CorrelationCurve curve;
  DensityField field;
  YoungResult young;
  DensityBounds bounds;
};

Estimates estimate(const SampleCloud& cloud, const BallMass& mass, const DimensionSettings& s) {
  Estimates e;
  e.curve = correlation_curve(cloud, s.grid, s.fit);
  SampleCloud sub = cloud;
  if (sub.points.size() > s.density_points) sub.points.resize(s.density_points);
  e.field = density_field(mass, sub, s.density_radii);
  if (e.field.supported() == 0) fail(ErrorCode::DegenerateSystem, "no sample point lies in the support at the largest radius");
  e.young = young_criterion(e.field, s.band);
  e.bounds = eq15_bounds(e.field, s.q);
  return e;
}

ordered_json estimates_json(const Estimates& e, const DimensionSettings& s) {
  ordered_json j;
  j["correlation"] = {{"slope", e.curve.slope},
                      {"stderr", e.curve.slope_stderr},
                      {"fit_window", {e.curve.fit_window.lo, e.curve.fit_window.hi}},
                      {"fit_points", e.curve.fit_points},
                      {"degenerate", e.curve.degenerate}};
  j["density"] = {{"points", e.field.points.size()},
                  {"supported", e.field.supported()},
                  {"radii", {e.field.radii_range.lo, e.field.radii_range.hi}},
                  {"radii_count", e.field.radii_count}};
  j["young"] = {{"c", e.young.c}, {"band", s.band}, {"fraction", e.young.fraction}};
  j["eq15"] = {{"gamma_lower", e.bounds.gamma_lower}, {"gamma_upper", e.bounds.gamma_upper}, {"quantile", e.bounds.quantile}};
  return j;
}

std::vector<std::size_t> parse_members(const std::string& text) {
  const std::string key = "gallery.member";
  auto one = [&](const std::string& t) {
    const double v = parse_real(t, key);
    if (!(v >= 1.0 && v <= 100000.0 && v == std::floor(v))) throw ConfigError(key, "member index must be an integer >= 1");
    return static_cast<std::size_t>(v);
  };
  const auto dash = text.find('-');
  if (dash == std::string::npos) return {one(text)};
  const std::size_t lo = one(trim(text.substr(0, dash))), hi = one(trim(text.substr(dash + 1)));
  if (hi < lo) throw ConfigError(key, "member range is reversed");
  std::vector<std::size_t> out;
  for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

}  // namespace

Report cmd_dimension(const Config& config) {
  Report r;
  r.command = "dimension";
  r.body = header("dimension", config);

  if (config.has("gallery.name")) {
    auto keys = kDimensionKeys;
    keys.insert(keys.end(), {"gallery.name", "gallery.a", "gallery.member"});
    config.check_keys(keys);
    const std::string name = gallery_name(config);
    const double a = gallery_a(config, name);
    const std::string member = config.get_string("gallery.member", "limit");
    const DimensionSettings s = dimension_settings(config);
    if (config.has("dimension.tolerance")) throw ConfigError("dimension.tolerance", "only used for system-backed measures");
    std::vector<std::size_t> members;
    if (member != "limit") members = parse_members(member);
    for (std::size_t n : members) as_config("gallery.member", [&] { return gallery_member(name, n, a); });

    r.body["source"] = {{"gallery", name}, {"member", member}, {"a", name == "exm3.7" ? ordered_json(a) : ordered_json(nullptr)}};
    if (member == "limit") {
      const GalleryLimit lim = gallery_limit(name, a);
      const SampleCloud cloud = sample(lim.measure, s.count, s.seed, name + " limit");
      const Estimates e = estimate(cloud, ball_mass(lim.measure), s);
      r.body["result"] = estimates_json(e, s);
      r.body["result"]["limit_exact"] = lim.exact;
      const Interval hull = lim.measure.support_hull();
      if (hull.lo >= 0.0 && hull.hi <= 1.0) {
        const FlatnessCurve f = flatness_detector(lim.measure, s.flatness_radii);
        r.body["result"]["flatness"] = {{"fires", f.fires},
                                        {"finest_exponent", f.exponents.back()},
                                        {"coarsest_exponent", f.exponents.front()}};
        Csv csv({"r", "exponent", "bound", "s"});
        for (std::size_t i = 0; i < f.radii.size(); ++i)
          csv.row({num(f.radii[i]), num(f.exponents[i]), num(f.bounds[i]), num(f.best_s[i])});
        r.tables.push_back(csv.table("flatness"));
      } else {
        r.body["result"]["flatness"] = nullptr;
      }
      r.body["result"]["notes"] = {"correlation dimension <= modified correlation dimension; the flatness test certifies both are 0 when it fires",
                                   "eq15 bounds are sample quantiles, not certified dimensions"};
      r.tables.push_back({"correlation", correlation_csv(e.curve)});
      r.tables.push_back({"density", density_csv(e.field)});
      return r;
    }
    ordered_json rows = ordered_json::array();
    Csv csv({"n", "slope", "density_median", "gamma_lower", "gamma_upper"});
    for (std::size_t n : members) {
      const LineMeasure m = gallery_member(name, n, a);
      const SampleCloud cloud = sample(m, s.count, s.seed, name + " member " + std::to_string(n));
      const Estimates e = estimate(cloud, ball_mass(m), s);
      rows.push_back({{"n", n},
                      {"slope", e.curve.slope},
                      {"density_median", e.young.c},
                      {"gamma_lower", e.bounds.gamma_lower},
                      {"gamma_upper", e.bounds.gamma_upper}});
      csv.row({std::to_string(n), num(e.curve.slope), num(e.young.c), num(e.bounds.gamma_lower), num(e.bounds.gamma_upper)});
    }
    r.body["result"] = {{"members", rows}};
    r.tables.push_back(csv.table("members"));
    return r;
  }

  auto keys = with_system_keys(kDimensionKeys);
  keys.insert(keys.end(), {"bowen.depth", "bowen.tol", "dimension.measure_depth", "gibbs.depth"});
  config.check_keys(keys);
  const SystemSource src = build_system(config);
  const SystemSpec& system = require_finite(src);
  const DimensionSettings s = dimension_settings(config);
  const std::size_t depth = config.get_count("bowen.depth", 1, 40, 10);
  const double tol = bowen_tol(config, "bowen.tol", &system);
  const std::size_t measure_depth = config.get_count("dimension.measure_depth", 1, 20, 6);
  const std::size_t gibbs_depth = config.get_count("gibbs.depth", 1, 20, 4);
  const double agree = config.get_real_in("dimension.tolerance", 0.0, 1.0, 0.05);
  if (!system.full_shift()) throw ConfigError("system.family", "dimension reports need a full-shift system");

  const BowenSolution sol = bowen_solve(system, depth, tol);
  r.body["system"] = system_json(src);
  r.body["bowen"] = bowen_json(sol);
  if (!sol.regular) {
    r.exit_code = kIrregular;
    return r;
  }
  const CylinderMeasure m = conformal_cylinder_measure(system, sol.h, measure_depth);
  const GibbsState st = eigenmeasure(build_operator(system, PotentialSpec::geometric(sol.h), gibbs_depth));
  const EntropyLyapunov el = entropy_lyapunov(st, system, PotentialSpec::geometric(sol.h));
  const SampleCloud cloud = sample(m, s.count, s.seed, 1e-9, system.name + " conformal");
  const Estimates e = estimate(cloud, ball_mass(m), s);

  r.body["gibbs"] = {{"depth", gibbs_depth},
                     {"eigenvalue", st.eigenvalue},
                     {"entropy", el.entropy},
                     {"lyapunov", el.lyapunov},
                     {"ratio", el.ratio}};
  r.body["result"] = estimates_json(e, s);
  const double h = sol.h;
  ordered_json flags;
  flags["tolerance"] = agree;
  flags["ratio_vs_bowen"] = std::abs(el.ratio - h) <= agree;
  flags["correlation_vs_bowen"] = std::abs(e.curve.slope - h) <= agree;
  flags["density_vs_bowen"] = std::abs(e.young.c - h) <= agree;
  flags["eq15_ordered"] = e.bounds.gamma_lower <= e.bounds.gamma_upper;
  flags["consistent"] = flags["ratio_vs_bowen"].get<bool>() && flags["correlation_vs_bowen"].get<bool>() &&
                        flags["density_vs_bowen"].get<bool>() && flags["eq15_ordered"].get<bool>();
  r.body["flags"] = flags;
  r.body["notes"] = {"correlation dimension <= modified correlation dimension (recorded, not estimated)",
                     "eq15 bounds are sample quantiles, not certified dimensions"};
  r.tables.push_back({"correlation", correlation_csv(e.curve)});
  r.tables.push_back({"density", density_csv(e.field)});
  return r;
}

// --- gibbs ------------------------------------------------------------------

Report cmd_gibbs(const Config& config) {
  config.check_keys(with_system_keys({"gibbs.t", "gibbs.depth", "gibbs.tol", "gibbs.max_iters", "bowen.depth", "bowen.tol"}));
  const SystemSource src = build_system(config);
  const SystemSpec& system = require_finite(src);
  const std::string t_text = config.get_string("gibbs.t", "bowen");
  const bool at_root = t_text == "bowen";
  const double t_fixed = at_root ? 0.0 : config.get_real_in("gibbs.t", 0.0, 10.0);
  const std::size_t k = config.get_count("gibbs.depth", 1, 20, 2);
  const double tol = config.get_real_in("gibbs.tol", 1e-15, 1e-3, 1e-13);
  const std::size_t max_iters = config.get_count("gibbs.max_iters", 1, 100000000, 200000);
  const std::size_t bdepth = config.get_count("bowen.depth", 1, 40, 10);
  const double btol = bowen_tol(config, "bowen.tol", &system);
  const std::size_t n = system.alphabet_size();
  if (!system.full_shift() && !finitely_primitive_witness(system.incidence, (n - 1) * (n - 1) + 1))
    throw ConfigError("system.incidence", "incidence matrix is not primitive");
  if (std::pow(static_cast<double>(n), static_cast<double>(k)) > 4e6)
    throw ConfigError("gibbs.depth", "operator would have more than 4e6 states");

  Report r;
  r.command = "gibbs";
  r.body = header("gibbs", config);
  r.body["system"] = system_json(src);
  double t = t_fixed;
  if (at_root) {
    const BowenSolution sol = bowen_solve(system, bdepth, btol);
    r.body["bowen"] = bowen_json(sol);
    if (!sol.regular) {
      r.exit_code = kIrregular;
      return r;
    }
    t = sol.h;
  }
  const PotentialSpec pot = PotentialSpec::geometric(t);
  const OperatorMatrix op = build_operator(system, pot, k);
  const GibbsState st = eigenmeasure(op, tol, max_iters);
  const EntropyLyapunov el = entropy_lyapunov(st, system, pot);

  ordered_json res;
  res["t"] = t;
  res["depth"] = k;
  res["states"] = st.states.size();
  res["eigenvalue"] = st.eigenvalue;
  res["pressure"] = std::log(st.eigenvalue);
  res["potential_variation"] = op.variation;
  res["residuals"] = {{"eigen", st.eigen_residual}, {"density", st.density_residual}, {"invariance", st.invariance_residual}};
  res["iterations"] = st.iterations;
  res["entropy"] = el.entropy;
  res["lyapunov"] = el.lyapunov;
  // entropy / lyapunov is a dimension only for the equilibrium state at the root.
  res["ratio"] = at_root ? ordered_json(el.ratio) : ordered_json(nullptr);
  ordered_json masses = ordered_json::object();
  Csv csv({"word", "eigenmeasure", "density", "invariant"});
  for (std::size_t i = 0; i < st.states.size(); ++i) {
    masses[st.states[i].to_string()] = st.invariant[i];
    csv.row({st.states[i].to_string(), num(st.eigenmeasure[i]), num(st.density[i]), num(st.invariant[i])});
  }
  res["masses"] = masses;
  r.body["result"] = res;
  r.tables.push_back(csv.table("masses"));
  return r;
}

// --- gallery-list -----------------------------------------------------------

Report cmd_gallery_list(const Config& config) {
  config.check_keys({});
  Report r;
  r.command = "gallery-list";
  r.body = header("gallery-list", config);
  ordered_json items = ordered_json::array();
  Csv csv({"name", "parameter", "description"});
  for (const auto& g : gallery_list()) {
    items.push_back({{"name", g.name}, {"parameter", g.takes_parameter ? "a" : ""}, {"description", g.description}});
    csv.row({g.name, g.takes_parameter ? "a" : "", "\"" + g.description + "\""});
  }
  r.body["result"] = items;
  r.tables.push_back(csv.table("gallery"));
  return r;
}

// --- driver -----------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> render(const Report& report, const std::string& format,
                                                       const std::string& timestamp) {
  if (format == "json") {
    ordered_json j;
    j["body"] = report.body;
    j["timestamp"] = timestamp;
    return {{report.command + ".json", j.dump(2) + "\n"}};
  }
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& t : report.tables) {
    std::string text = "# " + report.command + " config_hash=" + report.body["config_hash"].get<std::string>() + "\n";
    files.emplace_back(t.name + ".csv", text + t.csv);
  }
  return files;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void check_out_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path p(dir);
  std::error_code ec;
  if (fs::exists(p, ec)) {
    if (!fs::is_directory(p, ec)) throw ConfigError("--out", "'" + dir + "' is not a directory");
    if (::access(p.c_str(), W_OK) != 0) throw ConfigError("--out", "'" + dir + "' is not writable");
    return;
  }
  const fs::path parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(parent, ec) || ::access(parent.c_str(), W_OK) != 0)
    throw ConfigError("--out", "cannot create '" + dir + "'");
}

void write_all(const std::string& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  // Stage every file first so a failure leaves no partial report behind.
  std::vector<std::pair<fs::path, fs::path>> staged;
  for (const auto& [name, content] : files) {
    const fs::path final_path = fs::path(dir) / name;
    fs::path tmp = final_path;
    tmp += ".partial";
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
      for (const auto& [t, f] : staged) fs::remove(t);
      fs::remove(tmp);
      throw std::runtime_error("failed to write " + final_path.string());
    }
    staged.emplace_back(tmp, final_path);
  }
  for (const auto& [tmp, final_path] : staged) fs::rename(tmp, final_path);
}

}  // namespace

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  Report report;
  try {
    if (inv.format != "json" && inv.format != "csv") throw ConfigError("--format", "expected csv or json");
    Config config = inv.config_path ? Config::load(*inv.config_path) : Config{};
    for (const auto& o : inv.overrides) config.set_assignment(o);
    if (inv.seed) config.set("sample.seed", std::to_string(*inv.seed));
    if (inv.out_dir) check_out_dir(*inv.out_dir);

    if (inv.command == "bowen") report = cmd_bowen(config);
    else if (inv.command == "scan") report = cmd_scan(config);
    else if (inv.command == "converge") report = cmd_converge(config);
    else if (inv.command == "dimension") report = cmd_dimension(config);
    else if (inv.command == "gibbs") report = cmd_gibbs(config);
    else if (inv.command == "gallery-list") report = cmd_gallery_list(config);
    else throw ConfigError("", "unknown command '" + inv.command + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IterationLimitError& e) {
    err << "no convergence: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return kNonConvergence;
  } catch (const Error& e) {
    const bool numeric = e.code() == ErrorCode::IterationLimit || e.code() == ErrorCode::DegenerateSystem;
    err << (numeric ? "numerical failure: " : "config error: ") << e.what() << "\n";
    return numeric ? kNonConvergence : kConfigError;
  }

  const auto files = render(report, inv.format, utc_timestamp());
  if (inv.out_dir) {
    try {
      write_all(*inv.out_dir, files);
    } catch (const std::exception& e) {
      err << "output error: " << e.what() << "\n";
      return kConfigError;
    }
  } else {
    for (const auto& [name, content] : files) {
      if (files.size() > 1) out << "# file: " << name << "\n";
      out << content;
    }
  }
  if (report.exit_code == kIrregular) err << "system is irregular: the pressure has no zero in [0, 1]\n";
  return report.exit_code;
}

}  // namespace confdim::cli
