#include "qlp/experiment.hpp"

#include <algorithm>
#include <stdexcept>

#include "qlp/dynamics.hpp"
#include "qlp/random.hpp"

namespace qlp {

void ExperimentConfig::validate() const {
  pulse.validate();
  if (shots < 1) throw std::invalid_argument("experiment config: shots must be >= 1");
  if (grid_points < 2) throw std::invalid_argument("experiment config: need at least two grid points");
  if (!(grid_span > 0.0)) throw std::invalid_argument("experiment config: span must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("experiment config: dt must be positive");
  if (!(eps0 >= 0.0) || !(eps1 >= 0.0) || !(eps0 + eps1 < 1.0))
    throw std::invalid_argument("experiment config: losses must satisfy eps0, eps1 >= 0 and eps0 + eps1 < 1");
}

Eigen::ArrayXd experiment_grid(const ExperimentConfig& config) {
  return uniform_grid(config.grid_center - config.grid_span,
                      config.grid_center + config.grid_span,
                      config.grid_points);
}

DataSet sample_profile(const ExperimentConfig& config) {
  config.validate();
  const Eigen::ArrayXd grid = experiment_grid(config);
  const SampledPulse pulse = discretize(config.pulse, config.dt);

  DataSet out;
  out.detunings = grid;
  out.probabilities.resize(grid.size());
  out.shots = Eigen::ArrayXi::Constant(grid.size(), config.shots);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double p0 = std::clamp(
        std::norm(propagate(pulse, grid[i] - config.delta0, ground_state())(1)),
        0.0, 1.0);  // |c1|^2 can exceed 1 by round-off
    const double p = apply_losses(p0, config.eps0, config.eps1);
    auto stream = rng::point_stream(config.seed, static_cast<std::uint64_t>(i));
    const int successes = rng::binomial(stream, config.shots, p);
    out.probabilities[i] =
        static_cast<double>(successes) / static_cast<double>(config.shots);
  }
  out.validate();
  return out;
}

}  // namespace qlp
