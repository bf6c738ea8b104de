#pragma once

#include <numbers>

// All internal frequencies are angular (rad/s) and all internal times are
// seconds. File formats and reports quote ordinary frequency f = omega/2pi
// in MHz or kHz and times in ns; the conversions live here and nowhere else.
namespace qlp::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double ns = 1e-9;  // seconds per nanosecond

// Backend sample spacing: 2/9 ns.
inline constexpr double default_dt = (2.0 / 9.0) * ns;

constexpr double mhz_to_rad_s(double f_mhz) { return two_pi * f_mhz * 1e6; }
constexpr double rad_s_to_mhz(double w) { return w / two_pi * 1e-6; }

constexpr double khz_to_rad_s(double f_khz) { return two_pi * f_khz * 1e3; }
constexpr double rad_s_to_khz(double w) { return w / two_pi * 1e-3; }

constexpr double hz_to_rad_s(double f_hz) { return two_pi * f_hz; }
constexpr double rad_s_to_hz(double w) { return w / two_pi; }

constexpr double ns_to_s(double t_ns) { return t_ns * ns; }
constexpr double s_to_ns(double t_s) { return t_s / ns; }

}  // namespace qlp::units
