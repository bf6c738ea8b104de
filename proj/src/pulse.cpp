#include "qlp/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace qlp {

const char* to_string(PulseKind kind) {
  switch (kind) {
    case PulseKind::rectangular: return "rectangular";
    case PulseKind::sech: return "sech";
    case PulseKind::exponential: return "exponential";
    case PulseKind::gaussian: return "gaussian";
    case PulseKind::sech2: return "sech2";
  }
  return "?";
}

PulseKind pulse_kind_from_string(std::string_view name) {
  if (name == "rectangular") return PulseKind::rectangular;
  if (name == "sech") return PulseKind::sech;
  if (name == "exponential") return PulseKind::exponential;
  if (name == "gaussian") return PulseKind::gaussian;
  if (name == "sech2") return PulseKind::sech2;
  throw std::invalid_argument(
      "unknown pulse shape '" + std::string(name) +
      "'; valid shapes: rectangular, sech, exponential, gaussian, sech2");
}

void PulseSpec::validate() const {
  // omega0 = 0 is the idle pulse the synthetic backend uses for background
  // runs; negative amplitudes have no meaning.
  if (!(omega0 >= 0.0) || !std::isfinite(omega0))
    throw std::invalid_argument("pulse spec: omega0 must be non-negative");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("pulse spec: tau must be positive");
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("pulse spec: duration must be positive");
}

PulseSpec rectangular_pulse(double omega0, double duration) {
  PulseSpec spec{PulseKind::rectangular, omega0, duration, duration};
  spec.validate();
  return spec;
}

double envelope_unit(PulseKind kind, double tau, double duration, double t) {
  if (t < 0.0 || t > duration) return 0.0;
  if (kind == PulseKind::rectangular) return 1.0;
  const double x = (t - duration / 2.0) / tau;
  switch (kind) {
    case PulseKind::sech: return 1.0 / std::cosh(x);
    case PulseKind::exponential: return std::exp(-std::abs(x));
    case PulseKind::gaussian: return std::exp(-x * x);
    case PulseKind::sech2: {
      const double c = std::cosh(x);
      return 1.0 / (c * c);
    }
    default: return 1.0;
  }
}

double envelope(const PulseSpec& spec, double t) {
  if (!std::isfinite(t)) throw std::domain_error("envelope: non-finite time");
  return spec.omega0 * envelope_unit(spec.kind, spec.tau, spec.duration, t);
}

double duration_for_cutoff(PulseKind kind, double tau, double fraction,
                           double dt) {
  if (!(tau > 0.0)) throw std::invalid_argument("duration_for_cutoff: tau must be positive");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("duration_for_cutoff: fraction must be in (0, 1)");
  double T = 0.0;
  switch (kind) {
    case PulseKind::rectangular:
      throw std::invalid_argument(
          "duration_for_cutoff: rectangular pulses have no cutoff; their "
          "duration is chosen directly");
    case PulseKind::sech:
      T = 2.0 * tau * std::acosh(1.0 / fraction);
      break;
    case PulseKind::exponential:
      T = 2.0 * tau * std::log(1.0 / fraction);
      break;
    case PulseKind::gaussian:
      T = 2.0 * tau * std::sqrt(std::log(1.0 / fraction));
      break;
    case PulseKind::sech2:
      T = 2.0 * tau * std::acosh(1.0 / std::sqrt(fraction));
      break;
  }
  if (dt > 0.0) T = std::ceil(T / dt - 1e-12) * dt;
  return T;
}

namespace {

// Composite Simpson on [a, b]; the envelopes are smooth inside each half of
// the support (the exponential has a kink at the centre, so callers split
// there).
double simpson(PulseKind kind, double tau, double duration, double a,
               double b, int n_intervals) {
  const double h = (b - a) / n_intervals;
  double sum = envelope_unit(kind, tau, duration, a) +
               envelope_unit(kind, tau, duration, b);
  for (int i = 1; i < n_intervals; ++i) {
    const double w = (i % 2 == 0) ? 2.0 : 4.0;
    sum += w * envelope_unit(kind, tau, duration, a + i * h);
  }
  return sum * h / 3.0;
}

}  // namespace

double truncated_area_unit(PulseKind kind, double tau, double duration) {
  if (!(tau > 0.0) || !(duration > 0.0))
    throw std::invalid_argument("truncated_area_unit: tau and duration must be positive");
  if (kind == PulseKind::rectangular) return duration;
  const double mid = duration / 2.0;
  constexpr int n = 4096;
  return simpson(kind, tau, duration, 0.0, mid, n) +
         simpson(kind, tau, duration, mid, duration, n);
}

double amplitude_for_area(PulseKind kind, double tau, double duration,
                          double target_area) {
  if (!(target_area > 0.0))
    throw std::invalid_argument("amplitude_for_area: target area must be positive");
  return target_area / truncated_area_unit(kind, tau, duration);
}

SampledPulse discretize(const PulseSpec& spec, double dt) {
  spec.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("discretize: dt must be positive");
  if (dt > spec.duration)
    throw std::invalid_argument("discretize: dt exceeds the pulse duration");
  const auto n = static_cast<Eigen::Index>(std::llround(spec.duration / dt));
  SampledPulse out;
  out.dt = dt;
  out.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.samples[i] = envelope(spec, (static_cast<double>(i) + 0.5) * dt);
  return out;
}

}  // namespace qlp
