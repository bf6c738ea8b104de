#include "qlp/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlp/random.hpp"
#include "qlp/units.hpp"

namespace qlp {

void DataSet::validate() const {
  if (detunings.size() != probabilities.size() ||
      detunings.size() != shots.size())
    throw std::invalid_argument("dataset: column lengths differ");
  for (Eigen::Index i = 1; i < detunings.size(); ++i)
    if (!(detunings[i] > detunings[i - 1]))
      throw std::invalid_argument("dataset: detunings must be strictly increasing");
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    if (!(probabilities[i] >= 0.0 && probabilities[i] <= 1.0))
      throw std::invalid_argument("dataset: probabilities must lie in [0, 1]");
    if (shots[i] < 1)
      throw std::invalid_argument("dataset: shot counts must be positive");
  }
}

double apply_losses(double p0, double eps0, double eps1) {
  if (!(p0 >= 0.0 && p0 <= 1.0))
    throw std::domain_error("apply_losses: p0 must lie in [0, 1]");
  if (!(eps0 >= 0.0) || !(eps1 >= 0.0) || !(eps0 + eps1 < 1.0))
    throw std::domain_error(
        "apply_losses: need eps0 >= 0, eps1 >= 0 and eps0 + eps1 < 1");
  return eps0 + (1.0 - eps0 - eps1) * p0;
}

Eigen::ArrayXd residuals(const LineProfile& fit_curve, const DataSet& data) {
  if (fit_curve.detunings.size() != data.detunings.size())
    throw std::invalid_argument("residuals: grid size mismatch");
  for (Eigen::Index i = 0; i < data.detunings.size(); ++i) {
    const double ref = std::max(1.0, std::abs(data.detunings[i]));
    if (std::abs(fit_curve.detunings[i] - data.detunings[i]) > 1e-12 * ref)
      throw std::invalid_argument("residuals: grids differ");
  }
  return fit_curve.probabilities - data.probabilities;
}

double mae(const Eigen::ArrayXd& residual) {
  if (residual.size() == 0) throw std::invalid_argument("mae: empty residual vector");
  return residual.abs().mean();
}

double ofi(const DataSet& data) {
  data.validate();
  const Eigen::Index n = data.size();
  if (n < 2) throw std::invalid_argument("ofi: need at least two data points");
  double sum = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    sum += std::abs(data.probabilities[k + 1] - data.probabilities[k]);
  return sum / static_cast<double>(n - 1);
}

namespace {

constexpr double penalty_weight = 10.0;
constexpr double eps_sum_bound = 1.0 - 1e-6;

bool is_lorentzian(const ProfileModel& model) {
  return model.kind == ProfileModelKind::lorentzian;
}

// Residual vector in scaled parameter space. Analytic models carry three
// extra pseudo-residuals that impose the eps feasibility box as a quadratic
// cost penalty; the model itself is evaluated with clamped eps so the data
// rows stay meaningful outside the box.
struct Problem {
  const ProfileModel& model;
  const DataSet& data;
  double scale;  // detuning scale, rad/s

  Eigen::Index n_params() const { return is_lorentzian(model) ? 4 : 3; }
  Eigen::Index n_data() const { return data.size(); }
  Eigen::Index n_rows() const {
    return n_data() + (is_lorentzian(model) ? 0 : 3);
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd r(n_rows());
    if (is_lorentzian(model)) {
      const double amp = theta[0];
      const double k = theta[1] / (scale * scale);
      const double offset = theta[2];
      const double d0 = theta[3] * scale;
      for (Eigen::Index i = 0; i < n_data(); ++i)
        r[i] = lorentzian_profile(amp, k, offset, data.detunings[i] - d0) -
               data.probabilities[i];
      return r;
    }
    const double d0 = theta[0] * scale;
    const double e0 = theta[1];
    const double e1 = theta[2];
    const double e0c = std::clamp(e0, 0.0, 1.0);
    const double e1c = std::clamp(e1, 0.0, 1.0);
    for (Eigen::Index i = 0; i < n_data(); ++i) {
      const double p0 = model.evaluate(data.detunings[i] - d0);
      r[i] = e0c + (1.0 - e0c - e1c) * p0 - data.probabilities[i];
    }
    r[n_data() + 0] = penalty_weight * std::max(0.0, -e0);
    r[n_data() + 1] = penalty_weight * std::max(0.0, -e1);
    r[n_data() + 2] = penalty_weight * std::max(0.0, e0 + e1 - eps_sum_bound);
    return r;
  }

  Eigen::VectorXd scale_vector() const {
    Eigen::VectorXd d(n_params());
    if (is_lorentzian(model))
      d << 1.0, 1.0 / (scale * scale), 1.0, scale;
    else
      d << scale, 1.0, 1.0;
    return d;
  }
};

Eigen::MatrixXd fd_jacobian(const Problem& prob, const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& r0) {
  const Eigen::Index n = prob.n_params();
  Eigen::MatrixXd jac(r0.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    // Scaled parameters are O(1), so the relative step keeps a unit floor.
    const double h = 1e-6 * std::max(std::abs(theta[j]), 1.0);
    Eigen::VectorXd tp = theta;
    tp[j] += h;
    jac.col(j) = (prob.residual(tp) - r0) / h;
  }
  return jac;
}

}  // namespace

Eigen::VectorXd default_init(const ProfileModel& model, const DataSet& data) {
  data.validate();
  Eigen::Index imax = 0;
  data.probabilities.maxCoeff(&imax);
  const double pmax = data.probabilities.maxCoeff();
  const double pmin = data.probabilities.minCoeff();
  if (is_lorentzian(model)) {
    // Half-maximum width sets the curvature parameter.
    const double half = (pmax + pmin) / 2.0;
    Eigen::Index lo = -1, hi = -1;
    for (Eigen::Index i = 0; i < data.size(); ++i)
      if (data.probabilities[i] >= half) {
        if (lo < 0) lo = i;
        hi = i;
      }
    double width = (lo >= 0 && hi > lo)
                       ? (data.detunings[hi] - data.detunings[lo]) / 2.0
                       : 0.0;
    if (width <= 0.0)
      width = (data.detunings[data.size() - 1] - data.detunings[0]) / 10.0;
    Eigen::VectorXd init(4);
    init << pmax - pmin, 1.0 / (width * width), pmin, data.detunings[imax];
    return init;
  }
  Eigen::VectorXd init(3);
  init << data.detunings[imax], std::max(pmin, 0.0),
      std::max(1.0 - pmax, 0.0);
  return init;
}

FitResult fit(const ProfileModel& model, const DataSet& data,
              const Eigen::VectorXd& init) {
  model.validate();
  data.validate();

  const Eigen::Index n_par = is_lorentzian(model) ? 4 : 3;
  if (init.size() != n_par)
    throw std::invalid_argument("fit: initial parameter vector has the wrong size");
  if (data.size() <= n_par)
    throw std::invalid_argument("fit: insufficient data for the model's parameters");

  double scale = data.detunings.abs().maxCoeff();
  if (scale <= 0.0) scale = 1.0;
  const Problem prob{model, data, scale};
  const Eigen::VectorXd unscale = prob.scale_vector();

  Eigen::VectorXd theta = init.array() / unscale.array();
  Eigen::VectorXd r = prob.residual(theta);
  double cost = r.squaredNorm();

  double lambda = 1e-3;
  bool converged = false;
  int iterations = 0;
  Eigen::MatrixXd jac;

  for (int iter = 0; iter < 500 && !converged; ++iter) {
    iterations = iter + 1;
    jac = fd_jacobian(prob, theta, r);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    const double diag_floor = 1e-14 * jtj.diagonal().maxCoeff() + 1e-300;

    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() +=
          lambda * jtj.diagonal().cwiseMax(diag_floor);
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      if (!step.allFinite()) {
        lambda *= 5.0;
        continue;
      }
      const Eigen::VectorXd candidate = theta + step;
      const Eigen::VectorXd rc = prob.residual(candidate);
      const double cost_c = rc.squaredNorm();
      // Only non-increasing steps are ever accepted; the cost is monotone
      // across accepted iterations by construction.
      if (cost_c <= cost) {
        const double rel_step =
            (step.array().abs() /
             theta.array().abs().max(1.0)).maxCoeff();
        const double rel_drop = (cost - cost_c) / std::max(cost, 1e-300);
        theta = candidate;
        r = rc;
        cost = cost_c;
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
        if (rel_step < 1e-8 || rel_drop < 1e-12) converged = true;
        break;
      }
      lambda *= 5.0;
      if ((step.array().abs() / theta.array().abs().max(1.0)).maxCoeff() <
          1e-10) {
        // Damping has shrunk the proposal below resolution: a stall at the
        // bottom of the basin counts as convergence.
        converged = true;
        accepted = true;
        break;
      }
    }
    if (!accepted) converged = true;
  }

  // Covariance from the data rows only (the penalty rows vanish at any
  // feasible optimum and carry no information about the data).
  const Eigen::MatrixXd jac_data = jac.topRows(data.size());
  const Eigen::VectorXd r_data = r.head(data.size());
  const double cost_data = r_data.squaredNorm();
  const Eigen::MatrixXd jtj_data = jac_data.transpose() * jac_data;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jtj_data);
  if (eig.info() != Eigen::Success ||
      eig.eigenvalues().minCoeff() <=
          1e-14 * std::max(eig.eigenvalues().maxCoeff(), 0.0))
    throw std::runtime_error("fit: degenerate fit (singular normal equations)");
  const double s2 =
      cost_data / static_cast<double>(data.size() - n_par);
  const Eigen::MatrixXd cov_scaled =
      eig.eigenvectors() *
      eig.eigenvalues().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose() * s2;

  FitResult out;
  out.model = to_string(model.kind);
  out.params = theta.array() * unscale.array();
  out.covariance =
      unscale.asDiagonal() * cov_scaled * unscale.asDiagonal();
  out.delta0_index = is_lorentzian(model) ? 3 : 0;
  if (is_lorentzian(model)) {
    out.param_names = {"amplitude", "k", "offset", "delta0"};
  } else {
    out.param_names = {"delta0", "eps0", "eps1"};
    // Report eps inside the feasible box.
    out.params[1] = std::clamp(out.params[1], 0.0, 1.0);
    out.params[2] =
        std::clamp(out.params[2], 0.0, std::max(0.0, eps_sum_bound - out.params[1]));
  }
  out.mae = r_data.array().abs().mean();
  out.ofi = ofi(data);
  out.cost = cost_data;
  out.converged = converged;
  out.iterations = iterations;
  out.restarts = 0;
  out.sdrf_hz = sdrf(out);
  return out;
}

FitResult fit(const ProfileModel& model, const DataSet& data) {
  return fit(model, data, default_init(model, data));
}

FitResult overfit_guard(
    const DataSet& data, const Eigen::VectorXd& init,
    const std::function<FitResult(const Eigen::VectorXd&)>& fit_fn,
    std::uint64_t seed) {
  const double index = ofi(data);
  FitResult best = fit_fn(init);
  best.ofi = index;
  best.restarts = 0;
  if (index > overfit_threshold) {
    rng::SplitMix64 gen{seed};
    for (int attempt = 1; attempt <= 10; ++attempt) {
      Eigen::VectorXd perturbed = init;
      for (Eigen::Index j = 0; j < init.size(); ++j)
        perturbed[j] = init[j] * gen.uniform(0.8, 1.2);
      FitResult candidate = fit_fn(perturbed);
      candidate.ofi = index;
      if (candidate.mae < best.mae) best = candidate;
    }
    best.restarts = 10;
  }
  return best;
}

FitResult overfit_guard(const ProfileModel& model, const DataSet& data,
                        std::uint64_t seed) {
  return overfit_guard(
      data, default_init(model, data),
      [&](const Eigen::VectorXd& init) { return fit(model, data, init); },
      seed);
}

double sdrf(const FitResult& result) {
  if (result.covariance.rows() <= result.delta0_index ||
      result.covariance.cols() <= result.delta0_index)
    throw std::runtime_error("sdrf: no covariance available");
  const double var =
      result.covariance(result.delta0_index, result.delta0_index);
  if (!std::isfinite(var) || var < 0.0)
    throw std::runtime_error("sdrf: covariance is degenerate");
  return std::sqrt(var) / units::two_pi;
}

}  // namespace qlp
