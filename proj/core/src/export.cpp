#include "confdim/export.hpp"

#include <charconv>
#include <nlohmann/json.hpp>

namespace confdim {

using nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string measure_json(const LineMeasure& measure) {
  ordered_json j;
  j["atoms"] = ordered_json::array();
  for (const auto& a : measure.atoms()) j["atoms"].push_back({a.x, a.weight});
  j["pieces"] = ordered_json::array();
  for (const auto& p : measure.pieces()) j["pieces"].push_back({p.lo, p.hi, p.density});
  return j.dump(2);
}

std::string cloud_text(const SampleCloud& cloud) {
  std::string out;
  for (double x : cloud.points) {
    out += format_number(x);
    out += '\n';
  }
  return out;
}

std::string gibbs_json(const GibbsState& state) {
  ordered_json j;
  j["eigenvalue"] = state.eigenvalue;
  ordered_json masses = ordered_json::object();
  for (std::size_t i = 0; i < state.states.size(); ++i) masses[state.states[i].to_string()] = state.invariant[i];
  j["masses"] = masses;
  j["residuals"] = {{"eigen", state.eigen_residual},
                    {"density", state.density_residual},
                    {"invariance", state.invariance_residual}};
  j["iterations"] = state.iterations;
  return j.dump(2);
}

std::string correlation_csv(const CorrelationCurve& curve) {
  std::string out = "r,C\n";
  for (std::size_t i = 0; i < curve.radii.size(); ++i)
    out += format_number(curve.radii[i]) + "," + format_number(curve.values[i]) + "\n";
  return out;
}

std::string density_csv(const DensityField& field) {
  std::string out = "x,lower,upper\n";
  for (std::size_t i = 0; i < field.points.size(); ++i) {
    if (!field.in_support[i]) continue;
    out += format_number(field.points[i]) + "," + format_number(field.lower[i]) + "," + format_number(field.upper[i]) + "\n";
  }
  return out;
}

}  // namespace confdim
