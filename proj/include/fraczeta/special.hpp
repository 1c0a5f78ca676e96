#ifndef FRACZETA_SPECIAL_HPP
#define FRACZETA_SPECIAL_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

namespace fraczeta {

using cplx = std::complex<double>;

namespace detail {

// Lanczos approximation, g = 7, nine terms (Godfrey's coefficients).
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log Γ(z) for Re z >= 0.5. The branch of the logarithm is not normalized;
// only exp() of the result is meaningful.
inline cplx log_gamma_right(cplx z) {
  z -= 1.0;
  cplx acc = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    acc += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  }
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(acc);
}

}  // namespace detail

/// Complex Gamma function. Poles at the nonpositive integers yield inf/nan.
inline cplx gamma(cplx z) {
  if (z.real() < 0.5) {
    // Reflection: Γ(z) Γ(1-z) = π / sin(πz)
    return std::numbers::pi /
           (std::sin(std::numbers::pi * z) * std::exp(detail::log_gamma_right(1.0 - z)));
  }
  return std::exp(detail::log_gamma_right(z));
}

/// Reciprocal Gamma 1/Γ(z); entire, exactly zero at z = 0, -1, -2, ...
inline cplx rgamma(cplx z) {
  if (z.real() < 0.5) {
    const double re = z.real();
    if (z.imag() == 0.0 && re == std::floor(re)) return 0.0;
    return std::sin(std::numbers::pi * z) * std::exp(detail::log_gamma_right(1.0 - z)) /
           std::numbers::pi;
  }
  return std::exp(-detail::log_gamma_right(z));
}

/// ψ(m + 1) = -γ_E + H_m for integer m >= 0.
inline double digamma_int_shift(int m) {
  constexpr double kEulerGamma = 0.57721566490153286061;
  double h = 0.0;
  for (int k = 1; k <= m; ++k) h += 1.0 / k;
  return -kEulerGamma + h;
}

/// Upper incomplete gamma Γ(a, x) for real a > 0, x >= 0.
inline double upper_incomplete_gamma(double a, double x) {
  if (x <= 0.0) return std::tgamma(a);
  if (x > 700.0 + a * std::log(x)) return 0.0;
  return boost::math::tgamma(a, x);
}

}  // namespace fraczeta

#endif  // FRACZETA_SPECIAL_HPP
