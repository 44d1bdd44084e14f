// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace mmscm {

inline constexpr double kSpeedOfLightMps = 299792458.0;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Power ratios. dB quantities are 10*log10 throughout; linear powers are mW
// when a unit matters.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

}  // namespace mmscm
