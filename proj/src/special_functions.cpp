#include "qlp/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qlp {

namespace {

constexpr double pi = std::numbers::pi;

// Lanczos g = 7 coefficients (Godfrey's 9-term set).
constexpr int lanczos_g = 7;
constexpr double lanczos_p[] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

Complex lanczos_core(Complex z) {
  z -= 1.0;
  Complex x = lanczos_p[0];
  for (int i = 1; i < lanczos_g + 2; ++i)
    x += lanczos_p[i] / (z + static_cast<double>(i));
  const Complex t = z + (lanczos_g + 0.5);
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

bool is_nonpositive_integer(Complex z) {
  if (z.imag() != 0.0) return false;
  return z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

Complex complex_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::domain_error("complex_gamma: non-finite argument");
  if (is_nonpositive_integer(z))
    throw std::domain_error("complex_gamma: pole at non-positive integer");
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * lanczos_core(1.0 - z));
  return lanczos_core(z);
}

Complex bessel_j_complex_order(Complex nu, double x) {
  if (!std::isfinite(x) || !std::isfinite(nu.real()) || !std::isfinite(nu.imag()))
    throw std::domain_error("bessel_j_complex_order: non-finite argument");
  if (!(x > 0.0) || x > 50.0)
    throw std::domain_error("bessel_j_complex_order: x must lie in (0, 50]");

  const double log_half_x = std::log(x / 2.0);
  Complex term = std::exp(nu * log_half_x) / complex_gamma(nu + 1.0);
  Complex sum = term;
  const double q = -(x / 2.0) * (x / 2.0);
  constexpr int max_terms = 200;
  for (int k = 0; k < max_terms; ++k) {
    term *= q / (static_cast<double>(k + 1) * (nu + static_cast<double>(k + 1)));
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
  }
  throw std::runtime_error(
      "bessel_j_complex_order: series did not converge in 200 terms");
}

}  // namespace qlp
