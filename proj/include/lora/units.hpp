// Unit conversions between the linear SI quantities used internally and the
// dB/dBm values that appear at configuration and reporting boundaries.
#pragma once

#include <cmath>

namespace lora {

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double nats_to_bits(double nats) { return nats / std::log(2.0); }

} // namespace lora
