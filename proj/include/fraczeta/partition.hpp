#ifndef FRACZETA_PARTITION_HPP
#define FRACZETA_PARTITION_HPP

#include <cmath>
#include <vector>

#include "fraczeta/error.hpp"
#include "fraczeta/special.hpp"
#include "fraczeta/spectrum.hpp"

namespace fraczeta {

/// A sample is accepted only when its tail bound is below this fraction of Z.
inline constexpr double kAcceptedRelativeTail = 1e-6;

struct PartitionSample {
  double t = 0.0;
  double value = 0.0;
  double truncation_error = 0.0;
  bool accepted = false;
};

namespace detail {

// Σ m e^{-(λ - shift) t}, accumulated in extended precision. Pairs are sorted,
// so the loop stops once the exponent underflows.
inline long double heat_sum(const SpectrumBatch& batch, double t, double shift = 0.0) {
  long double acc = 0.0L;
  for (const auto& [lambda, mult] : batch.pairs) {
    const long double x = static_cast<long double>(lambda - shift) * t;
    if (x > 11400.0L) break;
    acc += static_cast<long double>(mult) * std::exp(-x);
  }
  return acc;
}

// Bound on Σ_{λ > Λ} e^{-λ t} from N(λ) <= C λ^p: integrating by parts,
// Σ <= t ∫_Λ^∞ C λ^p e^{-λ t} dλ = C t^{-p} Γ(p + 1, Λ t).
inline double heat_tail_bound(const SpectrumBatch& batch, double t) {
  if (batch.is_finite()) return 0.0;
  const double p = batch.tail_exponent;
  return batch.tail_constant * std::pow(t, -p) * upper_incomplete_gamma(p + 1.0, batch.cutoff * t);
}

}  // namespace detail

/// Z(t) = Σ multiplicity · e^{-λ t} with a certified bound on the omitted tail.
inline PartitionSample partition_value(const SpectrumBatch& batch, double t) {
  if (!(t > 0.0)) throw DomainError("partition_value: t must be positive");
  if (batch.empty()) throw DomainError("partition_value: empty spectrum");
  PartitionSample s;
  s.t = t;
  s.value = static_cast<double>(detail::heat_sum(batch, t));
  s.truncation_error = detail::heat_tail_bound(batch, t);
  s.accepted = s.truncation_error < kAcceptedRelativeTail * s.value;
  return s;
}

/// Weyl ratio W(t) = Z(t) · t^{d_f/d_w}.
inline double weyl_ratio(const SpectrumBatch& batch, double t) {
  if (!batch.model) throw ConfigError("weyl_ratio: batch carries no model");
  const double a = batch.model->d_f / batch.model->d_w;
  return partition_value(batch, t).value * std::pow(t, a);
}

/// Log-spaced samples of Z on [t_lo, t_hi]; Z must be strictly decreasing.
inline std::vector<PartitionSample> trace_grid(const SpectrumBatch& batch, double t_lo, double t_hi,
                                               int points) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || points < 2) {
    throw DomainError("trace_grid: need 0 < t_lo < t_hi and at least two points");
  }
  std::vector<PartitionSample> out;
  out.reserve(static_cast<std::size_t>(points));
  const double step = std::log(t_hi / t_lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    out.push_back(partition_value(batch, t_lo * std::exp(step * i)));
    if (i > 0 && !(out[i].value < out[i - 1].value)) {
      throw ConvergenceError("trace_grid: Z is not strictly decreasing at t = " +
                             std::to_string(out[i].t));
    }
  }
  return out;
}

/// Exponential bound |Z(t)| <= c3 e^{-c4 t} for t >= 1 (and its two-sided
/// analogue -c5 e^{-c6 t} <= Z <= c3 e^{-c6 t}).
struct TailCertificate {
  double c3 = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;
  double c6 = 0.0;
  double t_lo = 1.0;
  double t_max = 1.0;
  bool verified = false;
};

/// c4 is the smallest eigenvalue; c3 the supremum of e^{c4 t}(Z(t) + tail)
/// on [1, t_max], which sits at t = 1 because that product is nonincreasing.
/// The bound is then audited on 100 interior points.
inline TailCertificate tail_certificate(const SpectrumBatch& batch, double t_max) {
  if (batch.empty()) throw DomainError("tail_certificate: empty spectrum");
  if (!(t_max > 1.0)) throw DomainError("tail_certificate: t_max must exceed 1");
  if (batch.has_zero_mode()) {
    throw DomainError("tail_certificate: zero eigenvalue present; exclude the zero mode");
  }
  TailCertificate cert;
  cert.t_max = t_max;
  cert.c4 = batch.lambda_min;
  cert.c6 = cert.c4;
  cert.c5 = 0.0;  // Z >= 0

  auto scaled = [&](double t) {
    return static_cast<double>(detail::heat_sum(batch, t, cert.c4)) +
           detail::heat_tail_bound(batch, t) * std::exp(cert.c4 * t);
  };
  cert.c3 = scaled(1.0);
  bool ok = std::isfinite(cert.c3);
  for (int i = 0; i < 100 && ok; ++i) {
    const double t = 1.0 + (t_max - 1.0) * (i + 0.5) / 100.0;
    ok = scaled(t) <= cert.c3 * (1.0 + 1e-12);
  }
  cert.verified = ok;
  return cert;
}

}  // namespace fraczeta

#endif  // FRACZETA_PARTITION_HPP
