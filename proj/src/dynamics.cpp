#include "qlp/dynamics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qlp {

void LineProfile::validate() const {
  if (detunings.size() != probabilities.size())
    throw std::invalid_argument("line profile: grid/probability length mismatch");
  for (Eigen::Index i = 1; i < detunings.size(); ++i)
    if (!(detunings[i] > detunings[i - 1]))
      throw std::invalid_argument("line profile: detunings must be strictly increasing");
  const bool numeric = provenance == "numeric";
  const bool unclamped = provenance.find("as-printed") != std::string::npos;
  const double hi = numeric ? 1.0 : 1.0 + 1e-9;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!std::isfinite(p) || p < 0.0 || (!unclamped && p > hi))
      throw std::invalid_argument("line profile: probability out of range");
  }
}

Eigen::ArrayXd uniform_grid(double lo, double hi, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("uniform_grid: need at least one point");
  if (n == 1) return Eigen::ArrayXd::Constant(1, (lo + hi) / 2.0);
  return Eigen::ArrayXd::LinSpaced(n, lo, hi);
}

Eigen::Matrix2cd step_unitary(double omega, double delta, double dt) {
  using namespace std::complex_literals;
  const double oeff = std::hypot(omega, delta);
  Eigen::Matrix2cd u;
  if (oeff == 0.0) {
    u.setIdentity();
    return u;
  }
  const double theta = oeff * dt / 2.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::complex<double> phase = std::exp(-0.5i * delta * dt);
  u(0, 0) = phase * (c + 1.0i * (delta / oeff) * s);
  u(0, 1) = phase * (-1.0i * (omega / oeff) * s);
  u(1, 0) = u(0, 1);
  u(1, 1) = phase * (c - 1.0i * (delta / oeff) * s);
  return u;
}

StateAmplitudes propagate(const SampledPulse& pulse, double delta,
                          const StateAmplitudes& initial) {
  if (pulse.samples.size() == 0)
    throw std::invalid_argument("propagate: empty pulse");
  if (std::abs(initial.squaredNorm() - 1.0) > 1e-6)
    throw std::invalid_argument("propagate: initial state is not normalized");
  StateAmplitudes c = initial;
  for (Eigen::Index i = 0; i < pulse.samples.size(); ++i)
    c = step_unitary(pulse.samples[i], delta, pulse.dt) * c;
  return c;
}

double transition_probability_numeric(const PulseSpec& spec, double delta,
                                      double dt) {
  const SampledPulse pulse = discretize(spec, dt);
  // |c1|^2 may exceed 1 by a few ulp of accumulated rounding
  return std::min(1.0, std::norm(propagate(pulse, delta, ground_state())(1)));
}

LineProfile profile_numeric(const PulseSpec& spec,
                            const Eigen::ArrayXd& detunings, double dt) {
  const SampledPulse pulse = discretize(spec, dt);
  LineProfile out;
  out.detunings = detunings;
  out.probabilities.resize(detunings.size());
  out.provenance = "numeric";
  for (Eigen::Index i = 0; i < detunings.size(); ++i)
    out.probabilities[i] = std::min(
        1.0, std::norm(propagate(pulse, detunings[i], ground_state())(1)));
  out.validate();
  return out;
}

}  // namespace qlp
