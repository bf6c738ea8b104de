#pragma once

#include <cstdint>

#include "qlp/fit.hpp"
#include "qlp/pulse.hpp"
#include "qlp/units.hpp"

namespace qlp {

// Synthetic stand-in for the quantum backend: the numerical oracle supplies
// the lossless probability, the loss model lifts and scales it, and each
// grid point records binomial shot counts from a per-point seeded stream.
struct ExperimentConfig {
  PulseSpec pulse;
  double grid_center = 0.0;   // rad/s offset of the grid centre
  double grid_span = units::mhz_to_rad_s(40.0);  // rad/s half-width
  int grid_points = 101;
  int shots = 4096;
  double eps0 = 0.0;          // truth lifted background
  double eps1 = 0.0;          // truth degradation
  double delta0 = 0.0;        // rad/s truth resonance offset
  std::uint64_t seed = 0;
  double dt = units::default_dt;

  void validate() const;
};

// The grid points the config sweeps, strictly increasing.
Eigen::ArrayXd experiment_grid(const ExperimentConfig& config);

// Draw one dataset. Bit-reproducible: every point's draws come from a
// stream that is a pure function of (seed, point index), so the result does
// not depend on evaluation order.
DataSet sample_profile(const ExperimentConfig& config);

}  // namespace qlp
