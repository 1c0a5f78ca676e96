#ifndef FRACZETA_SPECTRUM_HPP
#define FRACZETA_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fraczeta/error.hpp"
#include "fraczeta/model.hpp"

namespace fraczeta {

struct EigenvaluePair {
  double value = 0.0;
  std::int64_t multiplicity = 1;

  friend bool operator==(const EigenvaluePair&, const EigenvaluePair&) = default;
};

/// Sorted eigenvalues (pair form) plus a bound on what was left out.
///
/// Beyond `cutoff` the omitted eigenvalues obey N(λ) <= tail_constant · λ^tail_exponent.
/// A zero tail constant marks a batch that is the complete (finite) spectrum.
struct SpectrumBatch {
  std::optional<FractalModel> model;
  std::vector<EigenvaluePair> pairs;
  double lambda_min = 0.0;
  double cutoff = 0.0;
  double tail_exponent = 0.0;
  double tail_constant = 0.0;
  /// Last renormalization step |τ^{m+1} z^{(m+1)} - τ^m z^{(m)}| per pair, when
  /// the values are limits of a decimation sequence.
  std::vector<double> convergence_steps;

  [[nodiscard]] bool empty() const { return pairs.empty(); }
  [[nodiscard]] bool is_finite() const { return tail_constant == 0.0; }
  [[nodiscard]] bool has_zero_mode() const { return !pairs.empty() && pairs.front().value == 0.0; }

  [[nodiscard]] std::int64_t total_multiplicity() const {
    std::int64_t n = 0;
    for (const auto& p : pairs) n += p.multiplicity;
    return n;
  }

  /// Number of eigenvalues <= x, counted with multiplicity.
  [[nodiscard]] std::int64_t count_le(double x) const {
    std::int64_t n = 0;
    for (const auto& p : pairs) {
      if (p.value > x) break;
      n += p.multiplicity;
    }
    return n;
  }
};

namespace detail {

inline void check_pairs(const std::vector<EigenvaluePair>& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs[i].value >= 0.0) || !std::isfinite(pairs[i].value)) {
      throw ConfigError("eigenvalues must be finite and nonnegative");
    }
    if (pairs[i].multiplicity < 1) throw ConfigError("multiplicities must be positive");
    if (i > 0 && !(pairs[i].value > pairs[i - 1].value)) {
      throw ConfigError("eigenvalue pairs must be strictly increasing");
    }
  }
}

}  // namespace detail

/// Assembles a batch and fills lambda_min / cutoff. Throws on unsorted input.
inline SpectrumBatch make_batch(std::vector<EigenvaluePair> pairs,
                                std::optional<FractalModel> model = std::nullopt,
                                double tail_exponent = 0.0, double tail_constant = 0.0) {
  detail::check_pairs(pairs);
  SpectrumBatch b;
  b.model = std::move(model);
  b.pairs = std::move(pairs);
  b.tail_exponent = tail_exponent;
  b.tail_constant = tail_constant;
  if (!b.pairs.empty()) {
    b.cutoff = b.pairs.back().value;
    for (const auto& p : b.pairs) {
      if (p.value > 0.0) {
        b.lambda_min = p.value;
        break;
      }
    }
  }
  return b;
}

/// Sorts values and merges runs whose consecutive gaps are <= tol into one
/// pair (mean value, summed multiplicity).
inline std::vector<EigenvaluePair> cluster_pairs(std::vector<EigenvaluePair> raw, double abs_tol,
                                                 double rel_tol = 0.0) {
  std::sort(raw.begin(), raw.end(),
            [](const EigenvaluePair& a, const EigenvaluePair& b) { return a.value < b.value; });
  std::vector<EigenvaluePair> out;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i + 1;
    long double weighted = static_cast<long double>(raw[i].value) * raw[i].multiplicity;
    std::int64_t mult = raw[i].multiplicity;
    while (j < raw.size() &&
           raw[j].value - raw[j - 1].value <= abs_tol + rel_tol * std::abs(raw[j].value)) {
      weighted += static_cast<long double>(raw[j].value) * raw[j].multiplicity;
      mult += raw[j].multiplicity;
      ++j;
    }
    const double value = (j == i + 1) ? raw[i].value : static_cast<double>(weighted / mult);
    out.push_back({value, mult});
    i = j;
  }
  return out;
}

/// Dirichlet spectrum of -d²/dx² on [0, 1]: λ_n = (πn)², n = 1..M.
/// N(λ) = floor(√λ / π) gives the tail bound with p = 1/2, C = 1/π.
inline SpectrumBatch interval_spectrum(std::int64_t M) {
  if (M < 1) throw ConfigError("interval_spectrum: M must be >= 1");
  std::vector<EigenvaluePair> pairs;
  pairs.reserve(static_cast<std::size_t>(M));
  for (std::int64_t n = 1; n <= M; ++n) {
    const double x = std::numbers::pi * static_cast<double>(n);
    pairs.push_back({x * x, 1});
  }
  return make_batch(std::move(pairs), presets::interval(), 0.5, 1.0 / std::numbers::pi);
}

/// Eigenvalues τ^k with multiplicity N^k for k = 0..K. Its zeta function is
/// Σ N^k τ^{-ks/2} = 1 / (1 - N τ^{-s/2}) once K → ∞; the counting function
/// of the full sequence obeys N(λ) <= N/(N-1) · λ^{log N / log τ}.
inline SpectrumBatch toy_geometric_spectrum(const FractalModel& model, int K) {
  if (K < 0) throw ConfigError("toy_geometric_spectrum: K must be >= 0");
  std::vector<EigenvaluePair> pairs;
  std::int64_t mult = 1;
  double value = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (!std::isfinite(value)) throw ResourceError("toy_geometric_spectrum: tau^K overflows");
    pairs.push_back({value, mult});
    if (k == K) break;
    if (mult > std::numeric_limits<std::int64_t>::max() / model.N) {
      throw ResourceError("toy_geometric_spectrum: N^K overflows 64-bit multiplicity");
    }
    mult *= model.N;
    value *= model.tau;
  }
  const double p = std::log(static_cast<double>(model.N)) / std::log(model.tau);
  const double c = static_cast<double>(model.N) / (model.N - 1.0);
  return make_batch(std::move(pairs), model, p, c);
}

}  // namespace fraczeta

#endif  // FRACZETA_SPECTRUM_HPP
