#ifndef FRACZETA_FUNCTIONAL_HPP
#define FRACZETA_FUNCTIONAL_HPP

#include <cmath>
#include <complex>

#include "fraczeta/error.hpp"
#include "fraczeta/special.hpp"
#include "fraczeta/zeta.hpp"

namespace fraczeta {

/// Residuals of two candidate γ-derivative relations for ζ(s, γ).
struct FunctionalEqResidual {
  double paper_form = 0.0;   // |∂_γ ζ(s,γ) + γ ζ(s+2,γ)|
  double direct_form = 0.0;  // |∂_γ ζ(s,γ) + (s/2) ζ(s+2,γ)|
  cplx derivative;
  cplx shifted;              // ζ(s+2, γ)
  double richardson_gap = 0.0;
};

/// Central difference in γ with step h and one Richardson step:
/// D = (4 D_{h/2} - D_h) / 3. Fails when D and D_{h/2} differ by more than
/// `tolerance`, i.e. when h is too large for the requested accuracy.
template <class Zeta>
FunctionalEqResidual functional_eq_residual(const Zeta& zeta, cplx s, double gamma, double h = 1e-4,
                                            double tolerance = 1e-6) {
  if (!(h > 0.0)) throw DomainError("functional_eq_residual: h must be positive");
  auto central = [&](double step) {
    return (zeta(s, gamma + step).value - zeta(s, gamma - step).value) / (2.0 * step);
  };
  const cplx d1 = central(h);
  const cplx d2 = central(0.5 * h);
  FunctionalEqResidual r;
  r.derivative = (4.0 * d2 - d1) / 3.0;
  r.richardson_gap = std::abs(r.derivative - d2);
  if (r.richardson_gap > tolerance * std::max(1.0, std::abs(r.derivative))) {
    throw DomainError("functional_eq_residual: step h too large for the requested tolerance");
  }
  r.shifted = zeta(s + 2.0, gamma).value;
  r.paper_form = std::abs(r.derivative + gamma * r.shifted);
  r.direct_form = std::abs(r.derivative + 0.5 * s * r.shifted);
  return r;
}

/// Overload for a bare spectrum, evaluated by direct summation.
inline FunctionalEqResidual functional_eq_residual(const SpectrumBatch& batch, cplx s, double gamma,
                                                   double h = 1e-4, double tolerance = 1e-6) {
  if (batch.empty() || !(gamma - h > -batch.pairs.front().value)) {
    throw DomainError("functional_eq_residual: gamma - h must exceed -lambda_min");
  }
  return functional_eq_residual([&](cplx z, double g) { return zeta_direct(batch, z, g); }, s, gamma, h,
                                tolerance);
}

}  // namespace fraczeta

#endif  // FRACZETA_FUNCTIONAL_HPP
