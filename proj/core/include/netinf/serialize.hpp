#pragma once

#include <string>

#include "netinf/effects.hpp"
#include "netinf/simulate.hpp"

namespace netinf {

// JSON object {estimator, psi, se, ci, alpha, beta_a, beta_as, f_bar, vcov,
// n, dropped, warnings} (+ diagnostics when present).
std::string to_json(const EffectEstimate& estimate);
std::string to_csv(const EffectEstimate& estimate);

// Report JSON: config echo plus per-estimator operating characteristics.
std::string to_json(const SimulationReport& report);
// Tidy CSV: one row per estimator x configuration.
std::string to_csv(const SimulationReport& report);

}  // namespace netinf
