#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

#include "qlp/units.hpp"

namespace qlp {

enum class PulseKind { rectangular, sech, exponential, gaussian, sech2 };

const char* to_string(PulseKind kind);
PulseKind pulse_kind_from_string(std::string_view name);

// A parametrized pulse envelope, centred at t = duration/2 and truncated to
// [0, duration]. omega0 is the peak Rabi frequency in rad/s, tau the width
// in seconds (not used by the rectangular envelope), duration the total
// length T in seconds. envelope(0) == envelope(T) by symmetry.
struct PulseSpec {
  PulseKind kind = PulseKind::rectangular;
  double omega0 = 0.0;    // rad/s
  double tau = 0.0;       // s
  double duration = 0.0;  // s

  double center() const { return duration / 2.0; }
  void validate() const;  // throws std::invalid_argument
};

PulseSpec rectangular_pulse(double omega0, double duration);

// The envelope discretized on a fixed grid: samples[i] is the Rabi frequency
// (rad/s) over the i-th slice of width dt.
struct SampledPulse {
  double dt = 0.0;          // s
  Eigen::ArrayXd samples;   // rad/s, midpoint values

  double duration() const { return dt * static_cast<double>(samples.size()); }
};

// Unit-amplitude envelope value at time t (dimensionless, in [0,1]);
// zero outside [0, duration].
double envelope_unit(PulseKind kind, double tau, double duration, double t);

// Omega(t) in rad/s. Throws std::domain_error for non-finite t.
double envelope(const PulseSpec& spec, double t);

// Total duration T such that envelope(0) = fraction * omega0. Closed forms
// per shape; the rectangular envelope has no cutoff (its duration is a free
// choice) and is rejected. If dt > 0 the result is rounded up to an integer
// multiple of dt so a sampled pulse covers it with whole bins.
double duration_for_cutoff(PulseKind kind, double tau, double fraction,
                           double dt = 0.0);

// Integral over [0, duration] of the unit-amplitude envelope (seconds),
// evaluated by composite-Simpson quadrature on the truncated support.
double truncated_area_unit(PulseKind kind, double tau, double duration);

// Peak Rabi frequency giving the requested temporal pulse area (rad) on the
// truncated support [0, duration].
double amplitude_for_area(PulseKind kind, double tau, double duration,
                          double target_area);

// Midpoint sampling: samples[i] = envelope((i + 1/2) dt), with
// round(duration/dt) samples. Throws if dt <= 0 or dt > duration.
SampledPulse discretize(const PulseSpec& spec, double dt = units::default_dt);

}  // namespace qlp
