#pragma once

#include <Eigen/Core>

#include "qlp/profiles.hpp"
#include "qlp/pulse.hpp"
#include "qlp/units.hpp"

namespace qlp {

struct CalibrationResult {
  PulseKind kind = PulseKind::exponential;
  RzcForm form = RzcForm::strict;
  double a = 0.0;              // fitted area-correction parameter, in [0, 1]
  double residual = 0.0;       // max absolute profile deviation at the fit
  Eigen::ArrayXd grid;         // detuning grid used, rad/s
};

// 201 uniform points over +/-40 MHz, the default calibration window.
Eigen::ArrayXd default_calibration_grid();

// The shape-corrected line profile whose free parameter a is being
// calibrated. For the three shapes without exact solutions this is
// rzc_profile; the two exactly solvable shapes act as sanity endpoints:
// for the rectangular pulse the corrected area replaces the sine argument
// of the exact rectangular-pulse formula (best fit a = 1), and for the sech
// pulse the strict conjecture form reduces to the exact solution at a = 0.
double rzc_model_value(PulseKind kind, const PulseSpec& spec, double a,
                       double delta, RzcForm form);

// Least-squares calibration of a in [0, 1] against an explicit reference
// profile on the same grid, by golden-section search to 1e-4 in a.
// Throws std::runtime_error if multi-start searches disagree by more than
// 1e-3 (non-unimodal objective).
CalibrationResult calibrate_a(const PulseSpec& spec,
                              const Eigen::ArrayXd& grid, RzcForm form,
                              const Eigen::ArrayXd& reference);

// Convenience overload: the reference is the numerical line profile of the
// truncated pulse for {exponential, gaussian, sech2}, and the exact
// closed-form profile for the {rectangular, sech} sanity endpoints.
CalibrationResult calibrate_a(const PulseSpec& spec,
                              const Eigen::ArrayXd& grid,
                              RzcForm form = RzcForm::strict,
                              double dt = units::default_dt);

}  // namespace qlp
