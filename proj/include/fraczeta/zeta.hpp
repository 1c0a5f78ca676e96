#ifndef FRACZETA_ZETA_HPP
#define FRACZETA_ZETA_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "fraczeta/error.hpp"
#include "fraczeta/model.hpp"
#include "fraczeta/oscillation.hpp"
#include "fraczeta/partition.hpp"
#include "fraczeta/quadrature.hpp"
#include "fraczeta/special.hpp"
#include "fraczeta/spectrum.hpp"

namespace fraczeta {

enum class ZetaMethod { direct, continued };
enum class ContinuationMode { lemma, expbounds };

inline std::string to_string(ZetaMethod m) { return m == ZetaMethod::direct ? "direct" : "continued"; }
inline std::string to_string(ContinuationMode m) { return m == ContinuationMode::lemma ? "lemma" : "expbounds"; }

inline ContinuationMode parse_mode(const std::string& text) {
  if (text == "lemma") return ContinuationMode::lemma;
  if (text == "expbounds") return ContinuationMode::expbounds;
  throw ConfigError("mode must be 'lemma' or 'expbounds', got '" + text + "'");
}

/// One value of ζ(s, γ) = Σ mult (λ + γ)^{-s/2}.
struct ZetaPoint {
  cplx s;
  double gamma = 0.0;
  cplx value;
  ZetaMethod method = ZetaMethod::direct;
  double error_bound = 0.0;
};

/// Pole exclusion radius in s.
inline constexpr double kPoleExclusion = 1e-6;

/// Truncated sum over the batch; the omitted eigenvalues are bounded through
/// N(λ) <= C λ^p, which gives σ C Λ^{p-σ} / (σ - p) with σ = Re(s)/2.
inline ZetaPoint zeta_direct(const SpectrumBatch& batch, cplx s, double gamma) {
  if (batch.empty()) throw DomainError("zeta_direct: empty spectrum");
  if (!(gamma > -batch.pairs.front().value)) {
    throw DomainError("zeta_direct: gamma <= -lambda_min leaves the real branch");
  }
  const double sr = 0.5 * s.real();
  if (!batch.is_finite()) {
    const double ds = batch.model ? batch.model->d_S : 2.0 * batch.tail_exponent;
    if (!(s.real() > ds) || !(sr > batch.tail_exponent)) {
      throw DomainError("zeta_direct: Re(s) <= d_S; use zeta_continued");
    }
  }
  const cplx h = 0.5 * s;
  long double re = 0.0L;
  long double im = 0.0L;
  long double mag = 0.0L;
  for (const auto& [lambda, mult] : batch.pairs) {
    const double L = std::log(lambda + gamma);
    const double a = std::exp(-h.real() * L) * static_cast<double>(mult);
    re += a * std::cos(h.imag() * L);
    im -= a * std::sin(h.imag() * L);
    mag += a;
  }
  ZetaPoint z;
  z.s = s;
  z.gamma = gamma;
  z.value = {static_cast<double>(re), static_cast<double>(im)};
  z.method = ZetaMethod::direct;
  z.error_bound = 4e-16 * static_cast<double>(mag);
  if (!batch.is_finite()) {
    const double p = batch.tail_exponent;
    const double L = batch.cutoff;
    double tail = batch.tail_constant * sr * std::pow(L, p - sr) / (sr - p);
    if (gamma < 0.0) tail *= std::pow(1.0 + gamma / L, -sr - 1.0);
    z.error_bound += tail;
  }
  return z;
}

/// Half-plane Re(s) > half_plane_bound on which continued values are served.
struct ContinuationDomain {
  double half_plane_bound = 0.0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();

  [[nodiscard]] bool contains(cplx s) const { return s.real() > half_plane_bound; }
};

inline ContinuationDomain continuation_domain(const FractalModel& model, ContinuationMode mode) {
  if (mode == ContinuationMode::lemma) return {model.lemma_abscissa(), std::numeric_limits<double>::quiet_NaN()};
  return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

enum class I1Mode { closed_form, numeric };

/// Mellin pieces of ζ(2 s_half, γ); each already carries the factor 1/Γ(s_half),
/// so I1 + I2 + I3 = ζ(2 s_half, γ).
struct MellinSplit {
  cplx I1;
  cplx I2;
  cplx I3;
  double gamma = 0.0;
  cplx s_half;
  I1Mode i1_mode = I1Mode::closed_form;
  double error_bound = 0.0;

  [[nodiscard]] cplx total() const { return I1 + I2 + I3; }
};

struct ContinuationSettings {
  ContinuationMode mode = ContinuationMode::lemma;
  double t_min = 0.0;           // lower end of the numerically integrated remainder
  double fit_t_lo = 0.0;        // start of the tower-fit period; 0 picks t_min τ^{K-1}
  double tail_t_max = 20.0;
  int n_max = 8;
  double panel_width = 0.125;   // composite Gauss–Legendre panel in u = log(1/t)
};

/// Meromorphic continuation of ζ(s, γ) built from one spectrum batch.
///
/// ζ(s,γ) Γ(σ) = Σ_k Σ_n g_{k,n} E(σ - a_k - iω_n, γ) + ∫_{t_min}^1 t^{σ-1} R e^{-γt} dt
///             + ∫_1^∞ t^{σ-1} Z e^{-γt} dt + (small-t remainder, bounded),
/// with σ = s/2, ω_n = 2πn/log τ, R = Z - Σ_k towers and
/// E(β, γ) = Σ_j (-γ)^j / (j! (β + j)). Node data are computed once; γ only
/// enters through e^{-γt}.
class MellinContinuation {
 public:
  MellinContinuation(const SpectrumBatch& batch, const FractalModel& model, ContinuationSettings settings)
      : model_(model), settings_(settings) {
    if (batch.empty()) throw DomainError("continuation needs a nonempty spectrum");
    if (!(settings_.t_min > 0.0) || !(settings_.t_min < 1.0)) {
      throw ConfigError("continuation t_min must lie in (0, 1)");
    }
    const auto a = model_.tower_exponents();
    if (settings_.fit_t_lo <= 0.0) {
      settings_.fit_t_lo = settings_.t_min * std::pow(model_.tau, static_cast<double>(a.size() - 1)) * (1.0 + 1e-12);
    }
    TowerFitOptions fit;
    fit.n_max = settings_.n_max;
    profiles_ = fit_towers(batch, model_, settings_.fit_t_lo, fit);
    tail_ = tail_certificate(batch, settings_.tail_t_max);
    if (!tail_.verified) throw ConvergenceError("tail certificate failed its audit");
    build_small_t_nodes(batch);
    build_large_t_nodes(batch);
  }

  [[nodiscard]] const FractalModel& model() const { return model_; }
  [[nodiscard]] const std::vector<OscillationProfile>& profiles() const { return profiles_; }
  [[nodiscard]] const TailCertificate& tail() const { return tail_; }
  [[nodiscard]] const ContinuationSettings& settings() const { return settings_; }
  [[nodiscard]] ContinuationMode mode() const { return settings_.mode; }
  [[nodiscard]] ContinuationDomain domain() const { return continuation_domain(model_, settings_.mode); }

  [[nodiscard]] ZetaPoint evaluate(cplx s, double gamma) const {
    check_gamma(gamma);
    if (!domain().contains(s)) {
      throw DomainError("s = " + describe(s) + " lies outside the continuation domain Re(s) > " +
                        std::to_string(domain().half_plane_bound));
    }
    const cplx sigma = 0.5 * s;
    const cplx r = rgamma(sigma);

    cplx regular{0.0, 0.0};
    cplx cancelled{0.0, 0.0};
    double magnitude = 0.0;
    for (const auto& p : profiles_) {
      for (int n = -p.n_max; n <= p.n_max; ++n) {
        const cplx g = p.g(n);
        if (g == cplx{0.0, 0.0}) continue;
        const cplx pole_base(p.exponent, omega(n));
        const cplx beta = sigma - pole_base;
        const int j_end = series_length(beta, gamma);
        double w = 1.0;
        for (int j = 0; j <= j_end; ++j) {
          if (j > 0) w *= -gamma / j;
          if (w == 0.0) break;
          const cplx d = beta + static_cast<double>(j);
          if (std::abs(d) < 0.5 * kPoleExclusion) {
            const cplx sp = pole_base - static_cast<double>(j);
            const double m = -sp.real();
            const bool gamma_pole = n == 0 && m >= -1e-12 && std::abs(m - std::round(m)) < 1e-12;
            if (!gamma_pole) {
              throw DomainError("s = " + describe(s) + " is within 1e-6 of the pole " + describe(2.0 * sp));
            }
            // 1/Γ(σ) ≈ (-1)^m m! (1 - ψ(m+1) ε) ε with ε = σ + m cancels 1/d = 1/ε.
            const int mi = static_cast<int>(std::lround(m));
            const cplx eps = sigma + static_cast<double>(mi);
            const double sign = (mi % 2 == 0) ? 1.0 : -1.0;
            cancelled += g * w * sign * std::tgamma(mi + 1.0) * (1.0 - digamma_int_shift(mi) * eps);
          } else {
            regular += g * w / d;
            magnitude += std::abs(g * w / d);
          }
        }
      }
    }

    const Integrals in = integrate(sigma, gamma, false);
    const double fourier = fourier_tail(sigma, gamma);
    ZetaPoint z;
    z.s = s;
    z.gamma = gamma;
    z.method = ZetaMethod::continued;
    z.value = r * (regular + in.value) + cancelled;
    z.error_bound = std::abs(r) * (in.error + fourier + 1e-15 * (magnitude + in.magnitude)) +
                    1e-12 * std::abs(cancelled);
    return z;
  }

  /// The three Mellin pieces for Re(2 s_half) > d_S, with I1 from the leading
  /// profile (closed form or quadrature of its Fourier series).
  [[nodiscard]] MellinSplit split(cplx s_half, double gamma, I1Mode mode = I1Mode::closed_form) const {
    check_gamma(gamma);
    const auto& lead = profiles_.front();
    if (!(s_half.real() > lead.exponent)) {
      throw DomainError("mellin split needs Re(2 s_half) > d_S");
    }
    const cplx r = rgamma(s_half);
    MellinSplit out;
    out.s_half = s_half;
    out.gamma = gamma;
    out.i1_mode = mode;

    double err = 0.0;
    cplx i1{0.0, 0.0};
    if (mode == I1Mode::closed_form) {
      for (int n = -lead.n_max; n <= lead.n_max; ++n) {
        i1 += lead.g(n) * series_E(s_half - cplx(lead.exponent, omega(n)), gamma, 1.0);
      }
    } else {
      // ∫_0^∞ e^{-u(σ - a_0)} G_0(u / log τ) e^{-γ e^{-u}} du, cut where the
      // integrand bound drops below 1e-17.
      const double rate = s_half.real() - lead.exponent;
      const double gmax = std::abs(lead.g(0)) + 2.0 * [&] {
        double acc = 0.0;
        for (int n = 1; n <= lead.n_max; ++n) acc += std::abs(lead.g(n));
        return acc;
      }();
      const double u_end = std::min(40.0 / rate, 1e5);
      const auto rule = composite_gauss_legendre(0.0, u_end, panels_for(0.0, u_end, settings_.panel_width));
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double u = rule.nodes[i];
        const double t = std::exp(-u);
        i1 += rule.weights[i] * std::exp(-u * (s_half - lead.exponent)) *
              lead.series(u / model_.period()) * std::exp(-gamma * t);
      }
      err += gmax * std::exp(-u_end * rate) / rate * std::exp(std::max(0.0, -gamma));
    }

    // I2: Z minus the leading term. On [t_min, 1] it is the measured remainder
    // plus the subleading towers; below t_min the towers integrate in closed form.
    const Integrals in2 = integrate(s_half, gamma, true);
    cplx i2 = in2.value_small;
    err += in2.error_small;
    for (std::size_t k = 1; k < profiles_.size(); ++k) {
      const auto& p = profiles_[k];
      for (int n = -p.n_max; n <= p.n_max; ++n) {
        i2 += p.g(n) * series_E(s_half - cplx(p.exponent, omega(n)), gamma, settings_.t_min);
      }
    }
    err += fourier_tail(s_half, gamma);

    out.I1 = r * i1;
    out.I2 = r * i2;
    out.I3 = r * in2.value_large;
    out.error_bound = std::abs(r) * (err + in2.error_large + 1e-15 * in2.magnitude);
    return out;
  }

 private:
  struct Node {
    double u;
    double t;
    double weight;
    double remainder;    // Z - Σ_k towers
    double subleading;   // Σ_{k>=1} towers
    double noise;
  };
  struct LargeNode {
    double t;
    double weight;
    double z;
    double noise;
  };
  struct Integrals {
    cplx value;
    cplx value_small;
    cplx value_large;
    double error = 0.0;
    double error_small = 0.0;
    double error_large = 0.0;
    double magnitude = 0.0;
  };

  [[nodiscard]] double omega(int n) const { return 2.0 * std::numbers::pi * n / model_.period(); }

  static std::string describe(cplx z) {
    return std::to_string(z.real()) + (z.imag() < 0 ? " - " : " + ") + std::to_string(std::abs(z.imag())) + "i";
  }

  void check_gamma(double gamma) const {
    if (!(gamma > -tail_.c4)) {
      throw DomainError("gamma must exceed -c4 = " + std::to_string(-tail_.c4));
    }
  }

  // Number of Taylor terms in γ: past every pole shift that can matter and
  // until |γ|^j / j! < 1e-17.
  static int series_length(cplx beta, double gamma) {
    if (gamma == 0.0) return 0;
    const int past_poles = std::max(0, static_cast<int>(std::ceil(-beta.real())) + 1);
    double w = 1.0;
    int j = 0;
    while (j < 400 && (j < past_poles || w > 1e-17)) {
      ++j;
      w *= std::abs(gamma) / j;
    }
    return j;
  }

  // ∫_0^c t^{β-1} e^{-γt} dt = Σ_j (-γ)^j c^{β+j} / (j! (β+j)), Re β > 0.
  static cplx series_E(cplx beta, double gamma, double c) {
    const int j_end = series_length(beta, gamma * c);
    cplx acc{0.0, 0.0};
    double w = 1.0;
    const cplx cb = std::pow(cplx(c, 0.0), beta);
    double cj = 1.0;
    for (int j = 0; j <= j_end; ++j) {
      if (j > 0) {
        w *= -gamma / j;
        cj *= c;
      }
      acc += w * cj / (beta + static_cast<double>(j));
    }
    return cb * acc;
  }

  void build_small_t_nodes(const SpectrumBatch& batch) {
    const double U = std::log(1.0 / settings_.t_min);
    const int panels = panels_for(0.0, U, settings_.panel_width);
    auto fill = [&](const QuadratureRule& rule, std::vector<Node>& out) {
      out.reserve(rule.size());
      for (std::size_t i = 0; i < rule.size(); ++i) {
        Node nd;
        nd.u = rule.nodes[i];
        nd.t = std::exp(-nd.u);
        nd.weight = rule.weights[i];
        const long double z = detail::heat_sum(batch, nd.t);
        long double towers = 0.0L;
        long double sub = 0.0L;
        double mag = static_cast<double>(z);
        for (std::size_t k = 0; k < profiles_.size(); ++k) {
          const double v = profiles_[k].term(nd.t);
          towers += v;
          if (k > 0) sub += v;
          mag += std::abs(v);
        }
        nd.remainder = static_cast<double>(z - towers);
        nd.subleading = static_cast<double>(sub);
        nd.noise = detail::heat_tail_bound(batch, nd.t) + 4e-16 * mag;
        out.push_back(nd);
      }
    };
    fill(composite_gauss_legendre(0.0, U, panels), fine_);
    fill(composite_gauss_legendre(0.0, U, std::max(1, panels / 2)), coarse_);

    const double u_first = U - model_.period();
    r_sup_ = 0.0;
    for (const auto& nd : fine_) {
      if (nd.u >= u_first) r_sup_ = std::max(r_sup_, std::abs(nd.remainder) + nd.noise);
    }
  }

  void build_large_t_nodes(const SpectrumBatch& batch) {
    t_end_ = std::max(2.0, 1.0 + 60.0 / tail_.c4);
    const double width = std::min(0.5, 4.0 / tail_.c4);
    const int panels = panels_for(1.0, t_end_, width);
    auto fill = [&](const QuadratureRule& rule, std::vector<LargeNode>& out) {
      out.reserve(rule.size());
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const double z = static_cast<double>(detail::heat_sum(batch, t));
        out.push_back({t, rule.weights[i], z, detail::heat_tail_bound(batch, t) + 4e-16 * z});
      }
    };
    fill(composite_gauss_legendre(1.0, t_end_, panels), large_fine_);
    fill(composite_gauss_legendre(1.0, t_end_, std::max(1, panels / 2)), large_coarse_);
  }

  // Numerical pieces of the Mellin integral. With `leading_only` the small-t
  // integrand is Z minus the leading tower (for the split), otherwise the full
  // remainder R.
  [[nodiscard]] Integrals integrate(cplx sigma, double gamma, bool leading_only) const {
    Integrals out;
    const double sr = sigma.real();
    auto small = [&](const std::vector<Node>& nodes, double* data_err, double* mag) {
      cplx acc{0.0, 0.0};
      for (const auto& nd : nodes) {
        const double f = leading_only ? nd.remainder + nd.subleading : nd.remainder;
        const double env = nd.weight * std::exp(-nd.u * sr - gamma * nd.t);
        const double ph = -nd.u * sigma.imag();
        acc += env * f * cplx(std::cos(ph), std::sin(ph));
        if (data_err != nullptr) *data_err += std::abs(env) * nd.noise;
        if (mag != nullptr) *mag += std::abs(env * f);
      }
      return acc;
    };
    auto large = [&](const std::vector<LargeNode>& nodes, double* data_err, double* mag) {
      cplx acc{0.0, 0.0};
      for (const auto& nd : nodes) {
        const double lt = std::log(nd.t);
        const double env = nd.weight * std::exp((sr - 1.0) * lt - gamma * nd.t);
        const double ph = sigma.imag() * lt;
        acc += env * nd.z * cplx(std::cos(ph), std::sin(ph));
        if (data_err != nullptr) *data_err += std::abs(env) * nd.noise;
        if (mag != nullptr) *mag += std::abs(env * nd.z);
      }
      return acc;
    };

    double data_small = 0.0;
    double data_large = 0.0;
    double mag = 0.0;
    const cplx s_fine = small(fine_, &data_small, &mag);
    const cplx s_coarse = small(coarse_, nullptr, nullptr);
    const cplx l_fine = large(large_fine_, &data_large, &mag);
    const cplx l_coarse = large(large_coarse_, nullptr, nullptr);

    // Below t_min: |R| <= r_sup (t / t_min)^q.
    const double grow = std::exp(std::max(0.0, -gamma) * settings_.t_min);
    // In the split the subleading towers below t_min are integrated exactly,
    // so only R is left there as well.
    double q = 1.0;
    if (!leading_only && settings_.mode == ContinuationMode::expbounds) q = std::max(1.0, 2.0 - sr);
    double small_t = std::numeric_limits<double>::infinity();
    if (sr + q > 0.0) small_t = r_sup_ * std::pow(settings_.t_min, sr) / (sr + q) * grow;

    // Beyond t_end: Z <= c3 e^{-c4 t}.
    const double b = tail_.c4 + gamma;
    double beyond = 0.0;
    if (sr > 0.0) {
      beyond = tail_.c3 * std::pow(b, -sr) * boost::math::tgamma(sr, b * t_end_);
    } else {
      beyond = tail_.c3 * std::pow(t_end_, sr - 1.0) * std::exp(-b * t_end_) / b;
    }

    out.value_small = s_fine;
    out.value_large = l_fine;
    out.value = s_fine + l_fine;
    out.error_small = std::abs(s_fine - s_coarse) + data_small + small_t;
    out.error_large = std::abs(l_fine - l_coarse) + data_large + beyond;
    out.error = out.error_small + out.error_large;
    out.magnitude = mag;
    return out;
  }

  // Modes beyond n_max are not summed; estimate them from the last fitted
  // coefficient, assuming geometric decay.
  [[nodiscard]] double fourier_tail(cplx sigma, double gamma) const {
    double acc = 0.0;
    for (const auto& p : profiles_) {
      const double tail = 2.0 * (std::abs(p.g(p.n_max)) + p.fit_residual);
      const double dist = std::max({omega(p.n_max + 1) - std::abs(sigma.imag()), 1e-6});
      acc += 2.0 * tail * std::exp(std::abs(gamma)) / dist;
    }
    return acc;
  }

  FractalModel model_;
  ContinuationSettings settings_;
  std::vector<OscillationProfile> profiles_;
  TailCertificate tail_;
  std::vector<Node> fine_;
  std::vector<Node> coarse_;
  std::vector<LargeNode> large_fine_;
  std::vector<LargeNode> large_coarse_;
  double r_sup_ = 0.0;
  double t_end_ = 2.0;
};

/// Continued value ζ(s, γ).
inline ZetaPoint zeta_continued(const MellinContinuation& engine, cplx s, double gamma) {
  return engine.evaluate(s, gamma);
}

/// I1/I2/I3 at s_half with each piece divided by Γ(s_half).
inline MellinSplit mellin_split_numeric(const MellinContinuation& engine, cplx s_half, double gamma,
                                        I1Mode mode = I1Mode::closed_form) {
  return engine.split(s_half, gamma, mode);
}

/// A spectrum with an optional continuation; picks the continued value inside
/// the continuation domain and the direct sum elsewhere.
class SpectralZeta {
 public:
  explicit SpectralZeta(SpectrumBatch batch) : batch_(std::move(batch)) {}
  SpectralZeta(SpectrumBatch batch, const FractalModel& model, const ContinuationSettings& settings)
      : batch_(std::move(batch)), engine_(std::in_place, batch_, model, settings) {}

  [[nodiscard]] const SpectrumBatch& batch() const { return batch_; }
  [[nodiscard]] bool has_continuation() const { return engine_.has_value(); }
  [[nodiscard]] const MellinContinuation& engine() const {
    if (!engine_) throw ConfigError("no continuation configured for this spectrum");
    return *engine_;
  }

  [[nodiscard]] ZetaPoint operator()(cplx s, double gamma) const {
    if (engine_ && engine_->domain().contains(s)) return engine_->evaluate(s, gamma);
    return zeta_direct(batch_, s, gamma);
  }

 private:
  SpectrumBatch batch_;
  std::optional<MellinContinuation> engine_;
};

}  // namespace fraczeta

#endif  // FRACZETA_ZETA_HPP
