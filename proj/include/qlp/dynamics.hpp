#pragma once

#include <Eigen/Core>
#include <string>

#include "qlp/pulse.hpp"
#include "qlp/units.hpp"

namespace qlp {

// Probability amplitudes (c0, c1) of the two-level system.
using StateAmplitudes = Eigen::Vector2cd;

inline StateAmplitudes ground_state() { return {1.0, 0.0}; }

// Transition probability evaluated on a detuning grid.
struct LineProfile {
  Eigen::ArrayXd detunings;      // rad/s, strictly increasing
  Eigen::ArrayXd probabilities;  // see validate() for the allowed range
  std::string provenance;        // "numeric", "analytic-<model>", "lorentzian"

  // Numeric profiles must lie in [0, 1]; analytic ones may exceed 1 by
  // round-off (1e-9 headroom). Profiles whose provenance contains
  // "as-printed" are exempt from the upper bound: the as-printed sech2 line
  // shape genuinely exceeds 1 near resonance.
  void validate() const;
};

Eigen::ArrayXd uniform_grid(double lo, double hi, Eigen::Index n);

// Exact propagator of the constant two-level Hamiltonian
//   H/hbar = [[0, omega/2], [omega/2, delta]]
// over a time dt (axis-angle form of the matrix exponential).
Eigen::Matrix2cd step_unitary(double omega, double delta, double dt);

// Applies the per-sample closed-form unitary of the piecewise-constant
// Hamiltonian. The initial state must be normalized to within 1e-6.
StateAmplitudes propagate(const SampledPulse& pulse, double delta,
                          const StateAmplitudes& initial);

// |c1|^2 after propagating the discretized pulse from the ground state.
double transition_probability_numeric(const PulseSpec& spec, double delta,
                                      double dt = units::default_dt);

// Pointwise transition_probability_numeric on a strictly increasing grid.
LineProfile profile_numeric(const PulseSpec& spec,
                            const Eigen::ArrayXd& detunings,
                            double dt = units::default_dt);

}  // namespace qlp
