#pragma once

// JSON import/export. Complex numbers are [re, im] pairs; matrices are
// lists of rows.

#include <json.hpp>

#include "eplt/channel.hpp"
#include "eplt/entanglement.hpp"
#include "eplt/thermo.hpp"

namespace eplt {

using Json = nlohmann::json;

Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// Accepts either complex [[re, im], ...] rows or plain real rows.
Json channel_to_json(const QuantumChannel& channel);
QuantumChannel channel_from_json(const Json& j);

Json to_json(const FefResult& r);
Json to_json(const ThermalityReport& r);
Json to_json(const RaceReport& r);
Json to_json(const TwirlConvergence& r);
Json to_json(const SpeedupScenario& s);

/// Missing fields keep their defaults; the result is validated.
SpeedupScenario scenario_from_json(const Json& j);

/// Finite numbers pass through; ±∞ and NaN become the strings "inf",
/// "-inf", "nan".
Json number(double x);

}  // namespace eplt
