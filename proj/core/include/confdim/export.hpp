#pragma once

// Text serialisations with fixed field order.

#include <string>

#include "confdim/dimension.hpp"
#include "confdim/line_measure.hpp"
#include "confdim/measures.hpp"
#include "confdim/transfer.hpp"

namespace confdim {

// {"atoms": [[x, w], ...], "pieces": [[lo, hi, density], ...]}
std::string measure_json(const LineMeasure& measure);

// One point per line.
std::string cloud_text(const SampleCloud& cloud);

// {"eigenvalue": ..., "masses": {word: mass}, "residuals": {...}}
std::string gibbs_json(const GibbsState& state);

std::string correlation_csv(const CorrelationCurve& curve);
std::string density_csv(const DensityField& field);

// Shortest round-trip decimal form.
std::string format_number(double x);

}  // namespace confdim
