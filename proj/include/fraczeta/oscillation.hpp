#ifndef FRACZETA_OSCILLATION_HPP
#define FRACZETA_OSCILLATION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fraczeta/error.hpp"
#include "fraczeta/model.hpp"
#include "fraczeta/partition.hpp"
#include "fraczeta/special.hpp"
#include "fraczeta/spectrum.hpp"

namespace fraczeta {

/// Fourier data of one periodic factor G_k in Z(t) ~ Σ_k t^{-d_k/d_w} G_k(log(1/t)).
///
/// G_k is stored as a function of T = log(1/t)/log τ, so it has period 1 and
/// G_k(T) = Σ_n g_n e^{2πinT}.
struct OscillationProfile {
  int k_index = 0;
  double exponent = 0.0;
  double period = 0.0;
  int n_max = 0;
  std::vector<cplx> coefficients;  // g_{-n_max} .. g_{n_max}
  double t_lo = 0.0;
  double t_hi = 0.0;
  double fit_residual = 0.0;
  double contamination = 0.0;
  int samples = 0;
  std::vector<std::string> warnings;

  [[nodiscard]] cplx g(int n) const {
    if (n < -n_max || n > n_max) return {0.0, 0.0};
    return coefficients[static_cast<std::size_t>(n + n_max)];
  }

  [[nodiscard]] double series(double T) const {
    double acc = g(0).real();
    for (int n = 1; n <= n_max; ++n) {
      const double ph = 2.0 * std::numbers::pi * n * T;
      acc += 2.0 * (g(n) * cplx(std::cos(ph), std::sin(ph))).real();
    }
    return acc;
  }

  /// t^{-exponent} G_k(T(t)).
  [[nodiscard]] double term(double t) const {
    return std::pow(t, -exponent) * series(std::log(1.0 / t) / period);
  }
};

struct TowerFitOptions {
  int n_max = 8;
  int initial_samples = 256;
  int max_samples = 8192;
  double coefficient_tol = 1e-8;
  double contamination_tol = 1e-3;
};

namespace detail {

using LdMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LdVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

inline long double accepted_heat_sum(const SpectrumBatch& batch, double t) {
  const long double z = heat_sum(batch, t);
  const double tail = heat_tail_bound(batch, t);
  if (!(tail < kAcceptedRelativeTail * static_cast<double>(z))) {
    throw DomainError("sample at t = " + std::to_string(t) +
                      " exceeds the truncation bound; extend the spectrum");
  }
  return z;
}

// Joint extraction of G_0..G_{K-1} at one t. Since every G_k has period 1 in
// T, Z(t τ^{-j}) = Σ_k t^{-a_k} τ^{j a_k} G_k(T) for j = first .. first+K-1,
// a Vandermonde system in the nodes τ^{a_k}.
class TowerExtractor {
 public:
  TowerExtractor(const SpectrumBatch& batch, double tau, std::vector<double> exponents, int first)
      : batch_(batch), tau_(tau), a_(std::move(exponents)), first_(first) {
    const auto K = static_cast<Eigen::Index>(a_.size());
    LdMatrix v(K, K);
    for (Eigen::Index j = 0; j < K; ++j) {
      for (Eigen::Index k = 0; k < K; ++k) {
        v(j, k) = std::pow(static_cast<long double>(tau_),
                           static_cast<long double>(a_[static_cast<std::size_t>(k)]) *
                               static_cast<long double>(first_ + j));
      }
    }
    lu_ = v.fullPivLu();
  }

  [[nodiscard]] std::vector<double> operator()(double t) const {
    const auto K = static_cast<Eigen::Index>(a_.size());
    LdVector z(K);
    for (Eigen::Index j = 0; j < K; ++j) {
      z(j) = accepted_heat_sum(batch_, t * std::pow(tau_, -static_cast<double>(first_ + j)));
    }
    const LdVector u = lu_.solve(z);
    std::vector<double> g(a_.size());
    for (std::size_t k = 0; k < a_.size(); ++k) {
      g[k] = static_cast<double>(u(static_cast<Eigen::Index>(k)) *
                                 std::pow(static_cast<long double>(t), static_cast<long double>(a_[k])));
    }
    return g;
  }

 private:
  const SpectrumBatch& batch_;
  double tau_;
  std::vector<double> a_;
  int first_;
  Eigen::FullPivLU<LdMatrix> lu_;
};

}  // namespace detail

/// Fits every declared tower of `model` on the window (t_lo, τ t_lo).
inline std::vector<OscillationProfile> fit_towers(const SpectrumBatch& batch, const FractalModel& model,
                                                  double t_lo, const TowerFitOptions& opt = {}) {
  if (!(t_lo > 0.0) || !(t_lo * model.tau < 1.0)) {
    throw DomainError("fit window must satisfy 0 < t_lo and tau * t_lo < 1");
  }
  if (opt.n_max < 0) throw ConfigError("n_max must be >= 0");
  const std::vector<double> a = model.tower_exponents();
  const std::size_t K = a.size();
  const double log_tau = model.period();
  const double t_hi = t_lo * model.tau;
  const double T0 = std::log(1.0 / t_hi) / log_tau;  // T runs over [T0, T0 + 1)

  const detail::TowerExtractor extract(batch, model.tau, a, 0);

  auto sample = [&](int ns, double offset) {
    std::vector<std::vector<double>> g(K, std::vector<double>(static_cast<std::size_t>(ns)));
    for (int i = 0; i < ns; ++i) {
      const double T = T0 + (i + offset) / ns;
      const auto v = extract(std::pow(model.tau, -T));
      for (std::size_t k = 0; k < K; ++k) g[k][static_cast<std::size_t>(i)] = v[k];
    }
    return g;
  };
  auto transform = [&](const std::vector<double>& values, int ns) {
    std::vector<cplx> c(static_cast<std::size_t>(2 * opt.n_max + 1));
    for (int n = 0; n <= opt.n_max; ++n) {
      long double re = 0.0L;
      long double im = 0.0L;
      for (int i = 0; i < ns; ++i) {
        const double ph = -2.0 * std::numbers::pi * n * (T0 + static_cast<double>(i) / ns);
        re += values[static_cast<std::size_t>(i)] * std::cos(ph);
        im += values[static_cast<std::size_t>(i)] * std::sin(ph);
      }
      const cplx gn(static_cast<double>(re / ns), n == 0 ? 0.0 : static_cast<double>(im / ns));
      c[static_cast<std::size_t>(opt.n_max + n)] = gn;
      c[static_cast<std::size_t>(opt.n_max - n)] = std::conj(gn);
    }
    return c;
  };

  std::vector<OscillationProfile> out(K);
  std::vector<std::vector<cplx>> previous;
  int ns = opt.initial_samples;
  bool converged = false;
  for (; ns <= opt.max_samples; ns *= 2) {
    const auto g = sample(ns, 0.0);
    std::vector<std::vector<cplx>> current(K);
    for (std::size_t k = 0; k < K; ++k) current[k] = transform(g[k], ns);
    if (!previous.empty()) {
      double move = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t n = 0; n < current[k].size(); ++n) {
          move = std::max(move, std::abs(current[k][n] - previous[k][n]));
        }
      }
      previous = std::move(current);
      if (move < opt.coefficient_tol) {
        converged = true;
        break;
      }
    } else {
      previous = std::move(current);
    }
  }
  if (!converged) ns /= 2;

  for (std::size_t k = 0; k < K; ++k) {
    OscillationProfile& p = out[k];
    p.k_index = static_cast<int>(k);
    p.exponent = a[k];
    p.period = log_tau;
    p.n_max = opt.n_max;
    p.coefficients = previous[k];
    p.t_lo = t_lo;
    p.t_hi = t_hi;
    p.samples = ns;
    if (!converged) p.warnings.emplace_back("Fourier coefficients did not settle to coefficient_tol");
  }

  // Reconstruction residual on the midpoints of the fitting grid.
  const auto mid = sample(ns, 0.5);
  for (std::size_t k = 0; k < K; ++k) {
    double r = 0.0;
    for (int i = 0; i < ns; ++i) {
      const double T = T0 + (i + 0.5) / ns;
      r = std::max(r, std::abs(out[k].series(T) - mid[k][static_cast<std::size_t>(i)]));
    }
    out[k].fit_residual = r;
  }

  // Contamination: re-extract one period higher in t and compare.
  const detail::TowerExtractor shifted(batch, model.tau, a, -1);
  const double scale = std::abs(out[0].g(0).real());
  constexpr int kProbe = 32;
  for (int i = 0; i < kProbe; ++i) {
    const double t = std::pow(model.tau, -(T0 + static_cast<double>(i) / kProbe));
    const auto lo = extract(t);
    const auto hi = shifted(t);
    for (std::size_t k = 0; k < K; ++k) {
      out[k].contamination = std::max(out[k].contamination, std::abs(hi[k] - lo[k]));
    }
  }
  for (auto& p : out) {
    if (p.contamination > opt.contamination_tol * scale) {
      p.warnings.emplace_back("subleading contamination " + std::to_string(p.contamination) +
                              " exceeds tolerance; move the window to smaller t");
    }
  }
  return out;
}

/// Profile of tower k_index fitted on (t_lo, t_hi), which must span exactly
/// one period t_hi = τ t_lo. All declared towers are extracted jointly.
inline OscillationProfile fit_oscillation(const SpectrumBatch& batch, const FractalModel& model,
                                          int k_index, int n_max, std::pair<double, double> window) {
  const auto [t_lo, t_hi] = window;
  if (!(t_lo > 0.0) || std::abs(t_hi / t_lo - model.tau) > 1e-9 * model.tau) {
    throw DomainError("fit window must span exactly one period: t_hi = tau * t_lo");
  }
  const auto dims = model.tower_dims();
  if (k_index < 0 || k_index >= static_cast<int>(dims.size())) {
    throw ConfigError("k_index outside the declared towers");
  }
  TowerFitOptions opt;
  opt.n_max = n_max;
  return fit_towers(batch, model, t_lo, opt)[static_cast<std::size_t>(k_index)];
}

/// Bounds on (leading term - Z) t^{d_∂/d_w} over a window.
struct AsymptoticCertificate {
  double c1 = 0.0;
  double c2 = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  int samples = 0;
  bool positive = false;
  bool sign_change = false;
  bool degenerate = false;
};

inline AsymptoticCertificate asymptotic_certificate(const SpectrumBatch& batch, const FractalModel& model,
                                                    const OscillationProfile& leading,
                                                    std::pair<double, double> window, int samples = 200) {
  const auto [t_lo, t_hi] = window;
  if (leading.k_index != 0) throw ConfigError("asymptotic_certificate needs the leading profile");
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || !(t_hi < 1.0) || samples < 2) {
    throw DomainError("asymptotic window must satisfy 0 < t_lo < t_hi < 1");
  }
  const double b = model.d_boundary / model.d_w;
  AsymptoticCertificate c;
  c.t_lo = t_lo;
  c.t_hi = t_hi;
  c.samples = samples;
  c.c1 = std::numeric_limits<double>::infinity();
  c.c2 = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (samples - 1));
    const long double z = detail::accepted_heat_sum(batch, t);
    const double dev = static_cast<double>(static_cast<long double>(leading.term(t)) - z) * std::pow(t, b);
    c.c1 = std::min(c.c1, dev);
    c.c2 = std::max(c.c2, dev);
    scale = std::max(scale, static_cast<double>(z) * std::pow(t, b));
  }
  c.positive = c.c1 > 0.0;
  c.sign_change = c.c1 < 0.0 && c.c2 > 0.0;
  c.degenerate = std::max(std::abs(c.c1), std::abs(c.c2)) < 1e-9 * scale;
  return c;
}

}  // namespace fraczeta

#endif  // FRACZETA_OSCILLATION_HPP
