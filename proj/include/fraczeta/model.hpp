#ifndef FRACZETA_MODEL_HPP
#define FRACZETA_MODEL_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraczeta/error.hpp"

namespace fraczeta {

/// Exact rational used for configuration values such as ρ_F = 5/3.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  [[nodiscard]] double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  [[nodiscard]] Rational normalized() const {
    if (den == 0) throw ConfigError("rational with zero denominator");
    const std::int64_t g = std::gcd(num, den);
    Rational r{num / g, den / g};
    if (r.den < 0) {
      r.num = -r.num;
      r.den = -r.den;
    }
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    const Rational x = a.normalized();
    const Rational y = b.normalized();
    return x.num == y.num && x.den == y.den;
  }

  /// Parses "p", "p/q" or "-p/q" (whitespace not allowed).
  static Rational parse(std::string_view text) {
    auto parse_int = [&](std::string_view part) {
      std::int64_t v = 0;
      const auto* first = part.data();
      const auto* last = part.data() + part.size();
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || part.empty()) {
        throw ConfigError("cannot parse rational '" + std::string(text) + "'");
      }
      return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational{parse_int(text), 1};
    return Rational{parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))}
        .normalized();
  }

  [[nodiscard]] std::string str() const {
    const Rational r = normalized();
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
  }
};

/// Parameter bundle describing one self-similar Laplacian.
///
/// Only the scaling data enter the computations: N cells, energy scaling ρ_F,
/// time scaling τ = ρ_F·N, and the dimensions derived from them. `d_k` lists
/// the exponents of the heat-trace expansion terms (d_0 = d_f first); when
/// empty the expansion is taken to have the two terms {d_f, d_boundary}.
struct FractalModel {
  std::string name;
  int N = 2;
  double rho_F = 1.0;
  std::optional<Rational> rho_F_exact;
  double tau = 1.0;
  double d_S = 0.0;
  double d_f = 0.0;
  double d_w = 2.0;
  double d_boundary = 0.0;
  std::vector<double> d_k;

  /// Multiplicative period log τ of the oscillating terms.
  [[nodiscard]] double period() const { return std::log(tau); }

  /// Vertical spacing 4π / log τ of the pole lattice in the s-plane.
  [[nodiscard]] double lattice_spacing() const {
    return 4.0 * std::numbers::pi / std::log(tau);
  }

  [[nodiscard]] std::vector<double> tower_dims() const {
    if (!d_k.empty()) return d_k;
    return {d_f, d_boundary};
  }

  /// Exponents d_k / d_w of t^{-d_k/d_w} in the small-t heat-trace expansion.
  [[nodiscard]] std::vector<double> tower_exponents() const {
    std::vector<double> out;
    for (double d : tower_dims()) out.push_back(d / d_w);
    return out;
  }

  /// Left boundary 2 d_∂ / d_w of the half-plane on which the leading-term
  /// continuation is valid.
  [[nodiscard]] double lemma_abscissa() const { return 2.0 * d_boundary / d_w; }
};

namespace detail {

inline void check_model(const FractalModel& m) {
  constexpr double kTol = 1e-9;
  if (!(m.rho_F > 0.0)) throw ConfigError("rho_F must be positive");
  if (!(m.tau > 1.0)) throw ConfigError("tau <= 1: spectral dimension undefined");
  if (m.N < 2) throw ConfigError("N must be >= 2");
  if (!(m.d_w > 0.0)) throw ConfigError("d_w must be positive");
  if (!(m.d_boundary >= 0.0)) throw ConfigError("d_boundary must be nonnegative");
  if (!(m.d_boundary < m.d_f)) throw ConfigError("d_boundary >= d_f");
  if (std::abs(m.tau - m.rho_F * m.N) > kTol * m.tau) {
    throw ConfigError("tau != rho_F * N");
  }
  const double ds = 2.0 * std::log(static_cast<double>(m.N)) / std::log(m.tau);
  if (std::abs(ds - m.d_S) > kTol) throw ConfigError("d_S != 2 log N / log tau");
  if (std::abs(m.d_S - 2.0 * m.d_f / m.d_w) > kTol) throw ConfigError("d_S != 2 d_f / d_w");
  if (!m.d_k.empty()) {
    if (std::abs(m.d_k.front() - m.d_f) > kTol * std::max(1.0, m.d_f)) {
      throw ConfigError("d_k[0] must equal d_f");
    }
    for (std::size_t i = 1; i < m.d_k.size(); ++i) {
      if (!(m.d_k[i] >= 0.0)) throw ConfigError("d_k entries must be nonnegative");
      if (!(m.d_k[i] < m.d_k[i - 1])) throw ConfigError("d_k must be strictly decreasing");
    }
  }
}

inline FractalModel build_model(std::string name, int N, double rho_F,
                                std::optional<Rational> rho_exact, double tau, double d_w,
                                double d_boundary, std::vector<double> d_k) {
  if (!(rho_F > 0.0)) throw ConfigError("rho_F must be positive");
  if (!(tau > 1.0)) throw ConfigError("tau <= 1: spectral dimension undefined");
  if (N < 2) throw ConfigError("N must be >= 2");
  FractalModel m;
  m.name = std::move(name);
  m.N = N;
  m.rho_F = rho_F;
  m.rho_F_exact = rho_exact;
  m.tau = tau;
  m.d_w = d_w;
  m.d_S = 2.0 * std::log(static_cast<double>(N)) / std::log(tau);
  m.d_f = m.d_S * d_w / 2.0;
  m.d_boundary = d_boundary;
  m.d_k = std::move(d_k);
  check_model(m);
  return m;
}

}  // namespace detail

/// Builds a model from N and an exact energy scaling; τ = N·ρ_F is formed in
/// rational arithmetic before conversion.
inline FractalModel make_model(std::string name, int N, Rational rho_F, double d_w,
                               double d_boundary, std::vector<double> d_k = {}) {
  rho_F = rho_F.normalized();
  const double rho = rho_F.value();
  const Rational tau_exact = Rational{rho_F.num * N, rho_F.den}.normalized();
  return detail::build_model(std::move(name), N, rho, rho_F, tau_exact.value(), d_w,
                             d_boundary, std::move(d_k));
}

/// Builds a model from a real-valued energy scaling (e.g. an estimated one).
inline FractalModel make_model(std::string name, int N, double rho_F, double d_w,
                               double d_boundary, std::vector<double> d_k = {}) {
  return detail::build_model(std::move(name), N, rho_F, std::nullopt, rho_F * N, d_w,
                             d_boundary, std::move(d_k));
}

/// Re-checks every invariant of an already constructed model.
inline void validate_model(const FractalModel& m) { detail::check_model(m); }

namespace presets {

/// Unit interval with Dirichlet conditions: two halves, ρ_F = 2, τ = 4.
inline FractalModel interval() { return make_model("interval", 2, Rational{2, 1}, 2.0, 0.0, {1.0, 0.0}); }

/// Sierpinski gasket with Dirichlet conditions on its three corners.
inline FractalModel gasket() {
  const double d_w = std::log(5.0) / std::log(2.0);
  const double d_f = std::log(3.0) / std::log(2.0);
  return make_model("gasket", 3, Rational{5, 3}, d_w, 0.0, {d_f, 0.0});
}

/// Exactly self-similar toy spectrum {τ^k with multiplicity N^k}. The walk
/// dimension is fixed at 2 so that d_f = d_S.
inline FractalModel toy(int N, std::int64_t tau) {
  const double d_s = 2.0 * std::log(static_cast<double>(N)) / std::log(static_cast<double>(tau));
  return make_model("toy(" + std::to_string(N) + "," + std::to_string(tau) + ")", N,
                    Rational{tau, N}, 2.0, 0.0, {d_s, 0.0});
}

/// Standard Sierpinski carpet, parameters only (no spectrum source). ρ_F is a
/// numerical estimate; faces of co-dimension 1 and 2 have d_1 = 1, d_2 = 0.
inline FractalModel carpet(double rho_F = 1.251) {
  const double d_f = std::log(8.0) / std::log(3.0);
  const double d_w = std::log(8.0 * rho_F) / std::log(3.0);
  return make_model("carpet", 8, rho_F, d_w, 1.0, {d_f, 1.0, 0.0});
}

}  // namespace presets

}  // namespace fraczeta

#endif  // FRACZETA_MODEL_HPP
