#pragma once

#include <complex>

namespace qlp {

using Complex = std::complex<double>;

// Gamma(z) for complex z via the Lanczos approximation (g = 7, 9-term
// coefficient set) with the reflection formula for Re(z) < 1/2. Relative
// error is below 1e-13 for |z| within the moderate range this library needs.
// Throws std::domain_error at the poles (non-positive integers) and for
// non-finite input.
Complex complex_gamma(Complex z);

// Bessel function of the first kind J_nu(x) for complex order nu and real
// x > 0, by the ascending power series
//   sum_k (-1)^k (x/2)^(nu+2k) / (k! Gamma(nu+k+1)),
// with (x/2)^nu = exp(nu log(x/2)) on the real-log branch. Terms are summed
// until one falls below 1e-16 of the partial sum; more than 200 terms is
// treated as out-of-domain use and throws std::runtime_error. Intended for
// small arguments (x <= 50 enforced); the exact Demkov line profile only
// needs x = omega/2 of order 1.
Complex bessel_j_complex_order(Complex nu, double x);

}  // namespace qlp
