#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

#include "qlp/dynamics.hpp"
#include "qlp/pulse.hpp"

namespace qlp {

// Closed-form / approximate transition line profiles. All take angular
// frequencies (rad/s) and times (s) and return the lossless transition
// probability at detuning delta.

// Rectangular pulse of duration T (exact).
double rabi_profile(double omega0, double duration, double delta);

// Hyperbolic-secant pulse of width tau (exact, infinite support).
double rosen_zener_profile(double omega0, double tau, double delta);

// Exponential pulse of width tau: exact solution in terms of Bessel
// functions of complex order (1 + i*delta*tau)/2 at argument omega0*tau/2.
double demkov_bessel_profile(double omega0, double tau, double delta);

enum class RzcKind { exponential, gaussian, sech2 };
enum class RzcForm { strict, as_printed };

const char* to_string(RzcForm form);

// Rosen-Zener-conjecture line shape: sin^2(S/2) times the normalized squared
// Fourier transform of the envelope, with the area correction
// S = tau_eff * sqrt(omega0^2 + a*delta^2) and tau_eff the infinite-support
// area divided by omega0 (exponential: 2 tau; gaussian: sqrt(pi) tau;
// sech2: 2 tau).
//
// The strict form carries the Fourier factor squared, as the conjecture
// demands. The as_printed form reproduces the published closed forms
// verbatim; they disagree with the strict derivation (first-power
// denominator for the exponential, rescaled sine argument and tail for the
// gaussian, and a sech2 prefactor that tends to 4 instead of 1 at zero
// detuning, so the as_printed sech2 value can exceed 1 near resonance).
double rzc_profile(RzcKind kind, double omega0, double tau, double a,
                   double delta, RzcForm form = RzcForm::strict);

// Gaussian pulse via the Davis-Pechukas quasienergy transition point:
// P = sin^2(Re D)/cosh^2(Im D) with the closed-form transition-point
// integral for the Gaussian envelope. Exactly on resonance the continuity
// limit sin^2(sqrt(pi) omega0 tau / 2) is returned; near resonance |delta|
// is evaluated at no less than 1e-6/tau, where the formula is regular.
double gaussian_ddp_profile(double omega0, double tau, double delta);

// L(delta) = A / (1 + k delta^2) + C.
double lorentzian_profile(double amplitude, double k, double offset,
                          double delta);

enum class ProfileModelKind {
  rabi,
  rosen_zener,
  demkov_bessel,
  demkov_rzc,
  gaussian_ddp,
  gaussian_rzc,
  sech2_rzc,
  lorentzian,
};

const char* to_string(ProfileModelKind kind);
ProfileModelKind profile_model_kind_from_string(std::string_view name);

// The analytic line-shape model used by fitting and the CLI: a model kind
// plus its fixed physical inputs. The Lorentzian has no fixed inputs (its
// parameters are all fitted) and cannot be evaluated through this struct.
struct ProfileModel {
  ProfileModelKind kind = ProfileModelKind::rabi;
  double omega0 = 0.0;    // rad/s
  double tau = 0.0;       // s (width; rabi uses duration instead)
  double duration = 0.0;  // s (rabi only)
  double a = 0.0;         // RZC area-correction parameter, in [0, 1]
  RzcForm form = RzcForm::strict;

  void validate() const;
  double evaluate(double delta) const;
  std::string label() const;
};

// Pointwise model evaluation over a strictly increasing grid.
LineProfile evaluate_profile(const ProfileModel& model,
                             const Eigen::ArrayXd& detunings);

// The line-shape model the corresponding pulse shape is usually fit with.
ProfileModelKind default_model_kind(PulseKind kind);

}  // namespace qlp
