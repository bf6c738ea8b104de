#include "qlp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qlp/dynamics.hpp"

namespace qlp {

namespace {

constexpr double pi = std::numbers::pi;

double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return (lo + hi) / 2.0;
}

}  // namespace

Eigen::ArrayXd default_calibration_grid() {
  return uniform_grid(units::mhz_to_rad_s(-40.0), units::mhz_to_rad_s(40.0),
                      201);
}

double rzc_model_value(PulseKind kind, const PulseSpec& spec, double a,
                       double delta, RzcForm form) {
  switch (kind) {
    case PulseKind::rectangular: {
      const double ad2 = a * delta * delta;
      const double root =
          ad2 == 0.0 ? spec.omega0 : std::sqrt(spec.omega0 * spec.omega0 + ad2);
      const double s = std::sin(spec.duration / 2.0 * root);
      const double oeff2 = delta * delta + spec.omega0 * spec.omega0;
      return spec.omega0 * spec.omega0 / oeff2 * s * s;
    }
    case PulseKind::sech: {
      const double ad2 = a * delta * delta;
      const double root =
          ad2 == 0.0 ? spec.omega0 : std::sqrt(spec.omega0 * spec.omega0 + ad2);
      const double s = std::sin(pi * spec.tau / 2.0 * root);
      const double c = std::cosh(pi * delta * spec.tau / 2.0);
      return s * s / (c * c);
    }
    case PulseKind::exponential:
      return rzc_profile(RzcKind::exponential, spec.omega0, spec.tau, a, delta, form);
    case PulseKind::gaussian:
      return rzc_profile(RzcKind::gaussian, spec.omega0, spec.tau, a, delta, form);
    case PulseKind::sech2:
      return rzc_profile(RzcKind::sech2, spec.omega0, spec.tau, a, delta, form);
  }
  throw std::invalid_argument("rzc_model_value: unknown pulse kind");
}

CalibrationResult calibrate_a(const PulseSpec& spec,
                              const Eigen::ArrayXd& grid, RzcForm form,
                              const Eigen::ArrayXd& reference) {
  spec.validate();
  if (grid.size() != reference.size())
    throw std::invalid_argument("calibrate_a: grid/reference length mismatch");
  if (grid.size() < 2)
    throw std::invalid_argument("calibrate_a: need at least two grid points");

  const auto objective = [&](double a) {
    double sse = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double r =
          rzc_model_value(spec.kind, spec, a, grid[i], form) - reference[i];
      sse += r * r;
    }
    return sse;
  };

  // Coarse scan to bracket candidate minima, then golden-section in each
  // bracket; disagreeing minimizers flag a non-unimodal objective, which
  // golden-section cannot be trusted on.
  constexpr int n_scan = 21;
  std::vector<double> fs(n_scan);
  for (int i = 0; i < n_scan; ++i)
    fs[i] = objective(static_cast<double>(i) / (n_scan - 1));

  std::vector<std::pair<double, double>> brackets;
  const auto at = [&](int i) { return static_cast<double>(i) / (n_scan - 1); };
  if (fs[0] < fs[1]) brackets.emplace_back(at(0), at(1));
  for (int i = 1; i + 1 < n_scan; ++i)
    if (fs[i] < fs[i - 1] && fs[i] < fs[i + 1])
      brackets.emplace_back(at(i - 1), at(i + 1));
  if (fs[n_scan - 1] < fs[n_scan - 2])
    brackets.emplace_back(at(n_scan - 2), at(n_scan - 1));
  if (brackets.empty()) brackets.emplace_back(0.0, 1.0);

  constexpr double tol = 1e-4;
  double best_a = 0.0, best_f = std::numeric_limits<double>::infinity();
  std::vector<double> minimizers;
  for (const auto& [lo, hi] : brackets) {
    const double a = golden_section(objective, lo, hi, tol);
    minimizers.push_back(a);
    const double f = objective(a);
    if (f < best_f) {
      best_f = f;
      best_a = a;
    }
  }
  for (double a : minimizers)
    if (std::abs(a - best_a) > 1e-3)
      throw std::runtime_error(
          "calibrate_a: objective is not unimodal on [0, 1]; multi-start "
          "minimizers disagree");

  CalibrationResult out;
  out.kind = spec.kind;
  out.form = form;
  out.a = std::clamp(best_a, 0.0, 1.0);
  out.grid = grid;
  out.residual = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    out.residual = std::max(
        out.residual,
        std::abs(rzc_model_value(spec.kind, spec, out.a, grid[i], form) -
                 reference[i]));
  return out;
}

CalibrationResult calibrate_a(const PulseSpec& spec,
                              const Eigen::ArrayXd& grid, RzcForm form,
                              double dt) {
  spec.validate();
  Eigen::ArrayXd reference(grid.size());
  switch (spec.kind) {
    case PulseKind::rectangular:
      for (Eigen::Index i = 0; i < grid.size(); ++i)
        reference[i] = rabi_profile(spec.omega0, spec.duration, grid[i]);
      break;
    case PulseKind::sech:
      for (Eigen::Index i = 0; i < grid.size(); ++i)
        reference[i] = rosen_zener_profile(spec.omega0, spec.tau, grid[i]);
      break;
    default:
      reference = profile_numeric(spec, grid, dt).probabilities;
      break;
  }
  return calibrate_a(spec, grid, form, reference);
}

}  // namespace qlp
