#include <cmath>
#include <string>

#include "asekit/energy_planner.hpp"
#include "asekit/errors.hpp"

namespace asekit {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void BsPowerProfile::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(p_watts) || !positive(pc) || !positive(ppre) || !positive(p0)) {
    throw DomainError("power profile fields must be strictly positive");
  }
  if (!positive(eta) || eta > 1.0) {
    throw DomainError("amplifier efficiency eta must lie in (0, 1], got " + std::to_string(eta));
  }
}

// Macro and micro use P0 = 12.2 W. That value gives (P/eta + P0)/Pc = 39.03
// and 11.42, and puts the energy-optimal designs at (35, 6) and (11, 3). The
// "-listed" variants keep P0 = 65.8 W.
BsPowerProfile builtin_profile(std::string_view name) {
  if (name == "macro") return {dbm_to_watts(54.0), 0.388, 16.9, 1.74, 12.2};
  if (name == "micro") return {dbm_to_watts(46.0), 0.285, 13.3, 1.74, 12.2};
  if (name == "pico") return {dbm_to_watts(33.0), 0.08, 6.8, 1.74, 1.5};
  if (name == "macro-listed") return {dbm_to_watts(54.0), 0.388, 16.9, 1.74, 65.8};
  if (name == "micro-listed") return {dbm_to_watts(46.0), 0.285, 13.3, 1.74, 65.8};
  throw DomainError("unknown built-in profile '" + std::string(name) + "'");
}

std::vector<std::string> builtin_profile_names() {
  return {"macro", "micro", "pico", "macro-listed", "micro-listed"};
}

}  // namespace asekit
