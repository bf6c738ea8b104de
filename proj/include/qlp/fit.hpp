#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qlp/dynamics.hpp"
#include "qlp/profiles.hpp"

namespace qlp {

// Measured (or synthetic) line-profile data: probabilities with shot counts
// per detuning point. Detunings are offsets from the nominal carrier, rad/s.
struct DataSet {
  Eigen::ArrayXd detunings;      // rad/s, strictly increasing
  Eigen::ArrayXd probabilities;  // in [0, 1]
  Eigen::ArrayXi shots;          // >= 1 per point

  Eigen::Index size() const { return detunings.size(); }
  void validate() const;
};

// Damped-least-squares fit outcome. Parameter order:
//   analytic models: [delta0 (rad/s), eps0, eps1]
//   lorentzian:      [amplitude, k (1/(rad/s)^2), offset, delta0 (rad/s)]
// The covariance is over the same ordering, in the same units.
struct FitResult {
  std::string model;
  std::vector<std::string> param_names;
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;
  int delta0_index = 0;
  double mae = 0.0;
  double ofi = 0.0;
  double sdrf_hz = 0.0;
  double cost = 0.0;  // sum of squared data residuals
  bool converged = false;
  int iterations = 0;
  int restarts = 0;
};

// Loss model: lifted background eps0 and degradation eps1 applied to the
// lossless probability p0.
double apply_losses(double p0, double eps0, double eps1);

// Elementwise fit-minus-data residuals; the grids must agree.
Eigen::ArrayXd residuals(const LineProfile& fit_curve, const DataSet& data);

// Mean absolute residual.
double mae(const Eigen::ArrayXd& residual);

// Overfitting index: mean absolute discrete derivative of the measured
// values (needs at least two points).
double ofi(const DataSet& data);

inline constexpr double overfit_threshold = 0.1;

// Moment-style starting parameters for fit().
Eigen::VectorXd default_init(const ProfileModel& model, const DataSet& data);

// Least-squares fit of the loss-corrected model (analytic kinds fit
// theta = (delta0, eps0, eps1) with the pulse parameters frozen; the
// Lorentzian fits (A, k, C, delta0)) by Gauss-Newton with adaptive damping
// and a finite-difference Jacobian. Converged when the relative step falls
// below 1e-8 or the relative cost change below 1e-12, within 500 iterations;
// non-convergence is reported through the flag with best-so-far parameters.
// Throws std::runtime_error on singular normal equations (degenerate fit)
// and std::invalid_argument when the data cannot determine the parameters.
FitResult fit(const ProfileModel& model, const DataSet& data,
              const Eigen::VectorXd& init);
FitResult fit(const ProfileModel& model, const DataSet& data);

inline constexpr std::uint64_t default_restart_seed = 0x5eedULL;

// Computes the overfitting index of the data; above the threshold the fit is
// rerun 10 times from initial parameters perturbed by a uniform +/-20% each
// (deterministic seeded stream) and the lowest-MAE result wins.
FitResult overfit_guard(
    const DataSet& data, const Eigen::VectorXd& init,
    const std::function<FitResult(const Eigen::VectorXd&)>& fit_fn,
    std::uint64_t seed = default_restart_seed);
FitResult overfit_guard(const ProfileModel& model, const DataSet& data,
                        std::uint64_t seed = default_restart_seed);

// Standard deviation of the fitted resonance frequency, in ordinary
// frequency units (Hz), from the covariance diagonal.
double sdrf(const FitResult& result);

}  // namespace qlp
