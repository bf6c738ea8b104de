#include "qlp/profiles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qlp/special_functions.hpp"

namespace qlp {

namespace {

constexpr double pi = std::numbers::pi;

double sq(double x) { return x * x; }

}  // namespace

double rabi_profile(double omega0, double duration, double delta) {
  if (!(duration > 0.0)) throw std::invalid_argument("rabi_profile: duration must be positive");
  const double oeff2 = delta * delta + omega0 * omega0;
  if (oeff2 == 0.0) return 0.0;
  return omega0 * omega0 / oeff2 * sq(std::sin(duration / 2.0 * std::sqrt(oeff2)));
}

double rosen_zener_profile(double omega0, double tau, double delta) {
  if (!(tau > 0.0)) throw std::invalid_argument("rosen_zener_profile: tau must be positive");
  return sq(std::sin(pi * omega0 * tau / 2.0) / std::cosh(pi * delta * tau / 2.0));
}

double demkov_bessel_profile(double omega0, double tau, double delta) {
  if (!(tau > 0.0)) throw std::invalid_argument("demkov_bessel_profile: tau must be positive");
  const double d = delta * tau;   // dimensionless detuning
  const double w = omega0 * tau;  // dimensionless peak Rabi frequency
  const Complex nu(0.5, d / 2.0);
  const Complex product =
      bessel_j_complex_order(nu, w / 2.0) * bessel_j_complex_order(-nu, w / 2.0);
  return sq(pi * w / 2.0 / std::cosh(pi * d / 2.0)) * sq(product.real());
}

const char* to_string(RzcForm form) {
  return form == RzcForm::strict ? "strict" : "as-printed";
}

namespace {

// sin^2 of half the corrected area S/2 = (tau_eff/2) sqrt(omega0^2+a delta^2).
// When a*delta^2 vanishes the square root is bypassed so the resonance value
// equals sin^2(area/2) exactly.
double rzc_sin2_half_area(double half_tau_eff, double omega0, double a,
                          double delta) {
  const double ad2 = a * delta * delta;
  const double root = ad2 == 0.0 ? omega0 : std::sqrt(omega0 * omega0 + ad2);
  return sq(std::sin(half_tau_eff * root));
}

}  // namespace

double rzc_profile(RzcKind kind, double omega0, double tau, double a,
                   double delta, RzcForm form) {
  if (!(tau > 0.0)) throw std::invalid_argument("rzc_profile: tau must be positive");
  if (!(a >= 0.0 && a <= 1.0))
    throw std::invalid_argument("rzc_profile: a must lie in [0, 1]");
  const double dt = delta * tau;
  switch (kind) {
    case RzcKind::exponential: {
      const double sin2 = rzc_sin2_half_area(tau, omega0, a, delta);
      const double denom = 1.0 + dt * dt;
      if (form == RzcForm::strict) return sin2 / (denom * denom);
      return sin2 / denom;
    }
    case RzcKind::gaussian: {
      if (form == RzcForm::strict) {
        const double sin2 =
            rzc_sin2_half_area(std::sqrt(pi) * tau / 2.0, omega0, a, delta);
        return sin2 * std::exp(-dt * dt / 2.0);
      }
      const double sin2 =
          rzc_sin2_half_area(std::sqrt(pi / 2.0) * tau, omega0, a, delta);
      return sin2 * std::exp(-dt * dt);
    }
    case RzcKind::sech2: {
      const double sin2 = rzc_sin2_half_area(tau, omega0, a, delta);
      const double u = pi * dt / 2.0;
      if (form == RzcForm::strict) {
        const double fourier = std::abs(u) < 1e-8 ? 1.0 : u / std::sinh(u);
        return sin2 * fourier * fourier;
      }
      const double factor =
          std::abs(u) < 1e-8 ? 4.0 : sq(2.0 * u / std::sinh(u));
      return sin2 * factor;
    }
  }
  throw std::invalid_argument("rzc_profile: unknown kind");
}

namespace {

// Transition-point constants of the Davis-Pechukas treatment of the
// Gaussian two-level model.
constexpr double ddp_mu = 0.316193;
constexpr double ddp_nu = 0.462350;
constexpr double ddp_m = 1.311468;

double checked_log(double arg, const char* what) {
  if (!(arg > 0.0))
    throw std::domain_error(std::string("gaussian_ddp_profile: non-positive "
                                        "logarithm argument in ") + what);
  return std::log(arg);
}

double checked_sqrt(double arg, const char* what) {
  if (arg < 0.0)
    throw std::domain_error(std::string("gaussian_ddp_profile: negative "
                                        "square-root argument in ") + what);
  return std::sqrt(arg);
}

}  // namespace

double gaussian_ddp_profile(double omega0, double tau, double delta) {
  if (!(tau > 0.0) || !(omega0 > 0.0))
    throw std::invalid_argument("gaussian_ddp_profile: omega0 and tau must be positive");
  double d = std::abs(delta);
  if (d == 0.0) return sq(std::sin(std::sqrt(pi) * omega0 * tau / 2.0));
  d = std::max(d, 1e-6 / tau);

  const double alpha = omega0 / d;
  const double r = std::sqrt(alpha * alpha + 1.0);
  const double lobe = checked_log(
      alpha * alpha / (sq(1.0 + ddp_nu * (r - 1.0)) - 1.0), "the lobe factor");
  const double term1 = (r - 1.0) * checked_sqrt(0.5 * lobe, "the lobe factor");
  const double big_l = checked_log(alpha * alpha / (ddp_mu * (2.0 - ddp_mu)),
                                   "the tail exponent");
  const double term2 =
      0.5 * checked_sqrt(std::sqrt(big_l * big_l + pi * pi) + big_l,
                         "the tail exponent");
  const double re_d = d * tau * (term1 + term2);

  const double lm = checked_log(ddp_m * alpha, "the damping factor");
  const double im_d =
      0.5 * d * tau *
      checked_sqrt(std::sqrt(4.0 * lm * lm + pi * pi) - 2.0 * lm,
                   "the damping factor");
  return sq(std::sin(re_d) / std::cosh(im_d));
}

double lorentzian_profile(double amplitude, double k, double offset,
                          double delta) {
  return amplitude / (1.0 + k * delta * delta) + offset;
}

const char* to_string(ProfileModelKind kind) {
  switch (kind) {
    case ProfileModelKind::rabi: return "rabi";
    case ProfileModelKind::rosen_zener: return "rosen_zener";
    case ProfileModelKind::demkov_bessel: return "demkov_bessel";
    case ProfileModelKind::demkov_rzc: return "demkov_rzc";
    case ProfileModelKind::gaussian_ddp: return "gaussian_ddp";
    case ProfileModelKind::gaussian_rzc: return "gaussian_rzc";
    case ProfileModelKind::sech2_rzc: return "sech2_rzc";
    case ProfileModelKind::lorentzian: return "lorentzian";
  }
  return "?";
}

ProfileModelKind profile_model_kind_from_string(std::string_view name) {
  if (name == "rabi") return ProfileModelKind::rabi;
  if (name == "rosen_zener") return ProfileModelKind::rosen_zener;
  if (name == "demkov_bessel") return ProfileModelKind::demkov_bessel;
  if (name == "demkov_rzc") return ProfileModelKind::demkov_rzc;
  if (name == "gaussian_ddp") return ProfileModelKind::gaussian_ddp;
  if (name == "gaussian_rzc") return ProfileModelKind::gaussian_rzc;
  if (name == "sech2_rzc") return ProfileModelKind::sech2_rzc;
  if (name == "lorentzian") return ProfileModelKind::lorentzian;
  throw std::invalid_argument(
      "unknown profile model '" + std::string(name) +
      "'; valid models: rabi, rosen_zener, demkov_bessel, demkov_rzc, "
      "gaussian_ddp, gaussian_rzc, sech2_rzc, lorentzian");
}

void ProfileModel::validate() const {
  if (kind == ProfileModelKind::lorentzian)
    return;  // all parameters are fitted
  if (kind == ProfileModelKind::rabi) {
    if (!(omega0 > 0.0) || !(duration > 0.0))
      throw std::invalid_argument("profile model: rabi needs omega0 and duration");
    return;
  }
  if (!(omega0 > 0.0) || !(tau > 0.0))
    throw std::invalid_argument("profile model: omega0 and tau must be positive");
  if (kind == ProfileModelKind::demkov_rzc ||
      kind == ProfileModelKind::gaussian_rzc ||
      kind == ProfileModelKind::sech2_rzc) {
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("profile model: RZC parameter a must lie in [0, 1]");
  }
}

double ProfileModel::evaluate(double delta) const {
  switch (kind) {
    case ProfileModelKind::rabi:
      return rabi_profile(omega0, duration, delta);
    case ProfileModelKind::rosen_zener:
      return rosen_zener_profile(omega0, tau, delta);
    case ProfileModelKind::demkov_bessel:
      return demkov_bessel_profile(omega0, tau, delta);
    case ProfileModelKind::demkov_rzc:
      return rzc_profile(RzcKind::exponential, omega0, tau, a, delta, form);
    case ProfileModelKind::gaussian_ddp:
      return gaussian_ddp_profile(omega0, tau, delta);
    case ProfileModelKind::gaussian_rzc:
      return rzc_profile(RzcKind::gaussian, omega0, tau, a, delta, form);
    case ProfileModelKind::sech2_rzc:
      return rzc_profile(RzcKind::sech2, omega0, tau, a, delta, form);
    case ProfileModelKind::lorentzian:
      throw std::invalid_argument(
          "profile model: the Lorentzian has no fixed-parameter evaluation");
  }
  throw std::invalid_argument("profile model: unknown kind");
}

std::string ProfileModel::label() const {
  std::string s = std::string("analytic-") + to_string(kind);
  const bool is_rzc = kind == ProfileModelKind::demkov_rzc ||
                      kind == ProfileModelKind::gaussian_rzc ||
                      kind == ProfileModelKind::sech2_rzc;
  if (is_rzc && form == RzcForm::as_printed) s += "-as-printed";
  return s;
}

LineProfile evaluate_profile(const ProfileModel& model,
                             const Eigen::ArrayXd& detunings) {
  model.validate();
  LineProfile out;
  out.detunings = detunings;
  out.probabilities.resize(detunings.size());
  out.provenance = model.label();
  for (Eigen::Index i = 0; i < detunings.size(); ++i)
    out.probabilities[i] = model.evaluate(detunings[i]);
  out.validate();
  return out;
}

ProfileModelKind default_model_kind(PulseKind kind) {
  switch (kind) {
    case PulseKind::rectangular: return ProfileModelKind::rabi;
    case PulseKind::sech: return ProfileModelKind::rosen_zener;
    case PulseKind::exponential: return ProfileModelKind::demkov_bessel;
    case PulseKind::gaussian: return ProfileModelKind::gaussian_rzc;
    case PulseKind::sech2: return ProfileModelKind::sech2_rzc;
  }
  throw std::invalid_argument("default_model_kind: unknown pulse kind");
}

}  // namespace qlp
