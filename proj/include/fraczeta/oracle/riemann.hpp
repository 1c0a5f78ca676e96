#ifndef FRACZETA_ORACLE_RIEMANN_HPP
#define FRACZETA_ORACLE_RIEMANN_HPP

// Reference values used to audit the library. Deliberately self-contained:
// nothing here includes the implementation headers.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace fraczeta::oracle {

/// Riemann ζ(s), s != 1, by Euler–Maclaurin summation with N = 30 and
/// Bernoulli corrections up to B_30. Relative error ~1e-14 for Re(s) >= 0 and
/// |s| <= 20; left of that the head sum cancels, leaving ~1e-16 N^{1-Re(s)} absolute.
inline std::complex<double> riemann_zeta(std::complex<double> s) {
  using C = std::complex<double>;
  static constexpr std::array<double, 15> kB2k{
      1.0 / 6.0,          -1.0 / 30.0,     1.0 / 42.0,         -1.0 / 30.0,
      5.0 / 66.0,         -691.0 / 2730.0, 7.0 / 6.0,          -3617.0 / 510.0,
      43867.0 / 798.0,    -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0,
      8553103.0 / 6.0,    -23749461029.0 / 870.0, 8615841276005.0 / 14322.0};
  constexpr int N = 30;
  C sum{0.0, 0.0};
  for (int n = 1; n < N; ++n) sum += std::pow(static_cast<double>(n), -s);
  const C nps = std::pow(static_cast<double>(N), -s);
  sum += static_cast<double>(N) * nps / (s - 1.0) + 0.5 * nps;
  // term_k = B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
  C rising = s;
  double fact = 2.0;
  C npow = nps / static_cast<double>(N);
  for (int k = 1; k <= 15; ++k) {
    sum += kB2k[k - 1] / fact * rising * npow;
    rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    npow /= static_cast<double>(N) * N;
  }
  return sum;
}

/// Dirichlet interval spectrum (πn)²: ζ(s, 0) = π^{-s} ζ_R(s).
inline std::complex<double> interval_zeta(std::complex<double> s) {
  return std::pow(std::numbers::pi, -s) * riemann_zeta(s);
}

/// Heat trace of the same spectrum via the Jacobi theta transformation:
/// Σ_{n>=1} e^{-π²n²t} = ((πt)^{-1/2}(1 + 2Σ_k e^{-k²/t}) - 1) / 2.
inline double interval_heat_trace(double t) {
  double acc = 1.0;
  for (int k = 1; k < 50; ++k) {
    const double term = std::exp(-static_cast<double>(k) * k / t);
    acc += 2.0 * term;
    if (term < 1e-300) break;
  }
  return 0.5 * (acc / std::sqrt(std::numbers::pi * t) - 1.0);
}

/// Geometric spectrum {τ^k with multiplicity N^k, k >= 0}: ζ(s) = 1/(1 - N τ^{-s/2}).
inline std::complex<double> geometric_zeta(int N, double tau, std::complex<double> s) {
  return 1.0 / (1.0 - static_cast<double>(N) * std::pow(tau, -0.5 * s));
}

}  // namespace fraczeta::oracle

#endif  // FRACZETA_ORACLE_RIEMANN_HPP
