#ifndef FRACZETA_DECIMATION_HPP
#define FRACZETA_DECIMATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fraczeta/error.hpp"
#include "fraczeta/model.hpp"
#include "fraczeta/spectrum.hpp"

namespace fraczeta {

/// New eigenvalue introduced at every level >= from_level with multiplicity
/// (coef · base^(level + shift) + add) / div.
struct BirthRule {
  Rational value;
  int from_level = 2;
  std::int64_t coef = 1;
  std::int64_t base = 1;
  int shift = 0;
  std::int64_t add = 0;
  std::int64_t div = 1;

  [[nodiscard]] std::int64_t multiplicity(int level) const {
    const int e = level + shift;
    if (e < 0) throw ConfigError("birth rule: negative exponent at level " + std::to_string(level));
    std::int64_t pw = 1;
    for (int i = 0; i < e; ++i) {
      if (pw > std::numeric_limits<std::int64_t>::max() / std::max<std::int64_t>(base, 1)) {
        throw ResourceError("birth rule: multiplicity overflows at level " + std::to_string(level));
      }
      pw *= base;
    }
    const std::int64_t numer = coef * pw + add;
    if (div == 0 || numer % div != 0) {
      throw ConfigError("birth rule for value " + value.str() + " is not integral at level " +
                        std::to_string(level));
    }
    return numer / div;
  }
};

/// Spectral decimation data: the map R with R(z_m) = z_{m-1}, the level at
/// which generation starts, and the multiplicity bookkeeping.
struct DecimationConfig {
  std::vector<Rational> polynomial_coeffs;  // R(z) = Σ c_i z^i
  Rational renorm_factor{1, 1};
  std::string branch_rule = "smallest";
  std::vector<Rational> exceptional_set;
  int initial_level = 1;
  std::vector<std::pair<Rational, std::int64_t>> initial_spectrum;
  /// Descendant multiplicity = branch_factors[b] · ancestor multiplicity.
  std::vector<std::int64_t> branch_factors;
  std::vector<BirthRule> births;
  double convergence_tolerance = 1e-12;  // relative, on τ^m z^{(m)}
  int max_levels = 200;
};

/// Dirichlet gasket: R(z) = 5z - z², exceptional values {2, 5, 6}, level-1
/// spectrum {2, 5 (x2)}; 5 is born at level m with multiplicity
/// (3^{m-1} + 3)/2 and 6 with multiplicity (3^m - 3)/2.
inline DecimationConfig gasket_decimation() {
  DecimationConfig c;
  c.polynomial_coeffs = {Rational{0}, Rational{5}, Rational{-1}};
  c.renorm_factor = Rational{5};
  c.exceptional_set = {Rational{2}, Rational{5}, Rational{6}};
  c.initial_level = 1;
  c.initial_spectrum = {{Rational{2}, 1}, {Rational{5}, 2}};
  c.branch_factors = {1, 1};
  c.births = {BirthRule{Rational{5}, 2, 1, 3, -1, 3, 2}, BirthRule{Rational{6}, 2, 1, 3, 0, -3, 2}};
  return c;
}

struct ExceptionalHit {
  int level = 0;
  double ancestor = 0.0;
  double preimage = 0.0;
};

struct DecimationResult {
  SpectrumBatch batch;
  std::vector<ExceptionalHit> exceptional_hits;
};

namespace detail {

inline std::vector<double> coeffs_as_double(const DecimationConfig& c) {
  std::vector<double> out;
  for (const auto& r : c.polynomial_coeffs) out.push_back(r.value());
  while (!out.empty() && out.back() == 0.0) out.pop_back();
  return out;
}

inline double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// All real solutions w of R(w) = z, ascending. Throws when a preimage leaves
/// the real line.
inline std::vector<double> preimages(const std::vector<double>& c, double z) {
  const std::size_t deg = c.size() - 1;
  if (deg == 1) return {(z - c[0]) / c[1]};
  if (deg == 2) {
    const double a = c[2];
    const double b = c[1];
    const double cc = c[0] - z;
    const double disc = b * b - 4.0 * a * cc;
    if (disc < -1e-12 * (b * b + std::abs(4.0 * a * cc))) {
      throw ConfigError("decimation: preimage of " + std::to_string(z) + " is not real");
    }
    const double root = std::sqrt(std::max(disc, 0.0));
    const double q = -0.5 * (b + std::copysign(root, b));
    std::vector<double> w{q / a, q != 0.0 ? cc / q : 0.0};
    std::sort(w.begin(), w.end());
    return w;
  }
  // Companion matrix, then Newton polish.
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg),
                                               static_cast<Eigen::Index>(deg));
  for (std::size_t i = 1; i < deg; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) {
    const double ci = (i == 0 ? c[0] - z : c[i]);
    comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -ci / c[deg];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<double> w;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto r = es.eigenvalues()[i];
    if (std::abs(r.imag()) > 1e-9 * std::max(1.0, std::abs(r.real()))) {
      throw ConfigError("decimation: preimage of " + std::to_string(z) + " is not real");
    }
    double x = r.real();
    for (int it = 0; it < 3; ++it) {
      double f = eval_poly(c, x) - z;
      double df = 0.0;
      for (std::size_t k = deg; k >= 1; --k) df = df * x + static_cast<double>(k) * c[k];
      if (df == 0.0) break;
      x -= f / df;
    }
    w.push_back(x);
  }
  std::sort(w.begin(), w.end());
  return w;
}

inline bool is_exceptional(const std::vector<double>& exc, double w) {
  return std::any_of(exc.begin(), exc.end(), [w](double e) { return std::abs(w - e) < 1e-9; });
}

inline std::vector<double> exceptional_values(const DecimationConfig& c) {
  std::vector<double> out;
  for (const auto& r : c.exceptional_set) out.push_back(r.value());
  return out;
}

}  // namespace detail

/// Checks R(0) = 0, R'(0) = τ = renorm_factor, a supported branch rule and
/// that branch 0 maps 0 to itself.
inline void validate_decimation(const DecimationConfig& c, const FractalModel& model) {
  if (c.polynomial_coeffs.size() < 2) throw ConfigError("decimation: polynomial degree must be >= 1");
  if (!(c.polynomial_coeffs[0] == Rational{0})) throw ConfigError("decimation: R(0) != 0");
  if (std::abs(c.renorm_factor.value() - model.tau) > 1e-12 * model.tau) {
    throw ConfigError("decimation: renorm_factor " + c.renorm_factor.str() + " != tau");
  }
  if (!(c.polynomial_coeffs[1] == c.renorm_factor)) {
    throw ConfigError("decimation: R'(0) must equal renorm_factor");
  }
  if (c.branch_rule != "smallest") {
    throw ConfigError("decimation: unsupported branch_rule '" + c.branch_rule + "'");
  }
  const auto coeffs = detail::coeffs_as_double(c);
  if (coeffs.size() < 2) throw ConfigError("decimation: polynomial degree must be >= 1");
  const std::size_t degree = coeffs.size() - 1;
  if (c.branch_factors.size() != degree) {
    throw ConfigError("decimation: need one branch factor per preimage branch");
  }
  for (auto f : c.branch_factors) {
    if (f < 0) throw ConfigError("decimation: branch factors must be nonnegative");
  }
  if (c.initial_level < 0) throw ConfigError("decimation: initial_level must be >= 0");
  if (c.initial_spectrum.empty()) throw ConfigError("decimation: empty initial spectrum");
  for (const auto& [v, m] : c.initial_spectrum) {
    if (m < 1) throw ConfigError("decimation: initial multiplicities must be positive");
    (void)v;
  }
  const auto w0 = detail::preimages(coeffs, 0.0);
  if (std::abs(w0.front()) > 1e-14) throw ConfigError("decimation: branch 0 does not fix 0");
  if (!(c.convergence_tolerance > 0.0)) throw ConfigError("decimation: tolerance must be positive");
}

/// Level-`level` graph spectrum obtained by repeated preimages under R.
inline DecimationResult decimation_graph_spectrum(int level, const DecimationConfig& config,
                                                  const FractalModel& model) {
  validate_decimation(config, model);
  if (level < config.initial_level) {
    throw ConfigError("decimation: level " + std::to_string(level) + " below initial level " +
                      std::to_string(config.initial_level));
  }
  const auto coeffs = detail::coeffs_as_double(config);
  const auto exc = detail::exceptional_values(config);

  std::vector<EigenvaluePair> current;
  for (const auto& [v, m] : config.initial_spectrum) current.push_back({v.value(), m});
  current = cluster_pairs(std::move(current), 1e-12);

  DecimationResult result;
  for (int m = config.initial_level + 1; m <= level; ++m) {
    std::vector<EigenvaluePair> raw;
    raw.reserve(current.size() * config.branch_factors.size() + config.births.size());
    for (const auto& [z, mult] : current) {
      const auto w = detail::preimages(coeffs, z);
      for (std::size_t b = 0; b < w.size(); ++b) {
        if (detail::is_exceptional(exc, w[b])) {
          result.exceptional_hits.push_back({m, z, w[b]});
          continue;
        }
        if (config.branch_factors[b] > 0) raw.push_back({w[b], mult * config.branch_factors[b]});
      }
    }
    for (const auto& rule : config.births) {
      if (m >= rule.from_level) raw.push_back({rule.value.value(), rule.multiplicity(m)});
    }
    current = cluster_pairs(std::move(raw), 1e-12);
  }
  result.batch = make_batch(std::move(current), model);
  return result;
}

/// Outcome of following branch 0 from a level-m value to the renormalized limit.
struct LimitTrace {
  std::optional<double> value;  // absent when the chain meets an exceptional value
  double last_step = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// lim_k τ^k φ_0^k(z), where φ_0 is the branch of R^{-1} through 0.
inline LimitTrace renormalized_limit(double z, const DecimationConfig& config) {
  const auto coeffs = detail::coeffs_as_double(config);
  const auto exc = detail::exceptional_values(config);
  const double tau = config.renorm_factor.value();
  LimitTrace trace;
  double w = z;
  double scale = 1.0;
  double prev = z;
  for (int k = 1; k <= config.max_levels; ++k) {
    w = detail::preimages(coeffs, w).front();
    if (detail::is_exceptional(exc, w)) return trace;
    scale *= tau;
    const double next = scale * w;
    trace.last_step = std::abs(next - prev);
    trace.iterations = k;
    prev = next;
    if (trace.last_step <= config.convergence_tolerance * std::abs(next)) {
      trace.converged = true;
      break;
    }
  }
  trace.value = prev;
  return trace;
}

namespace detail {

// Smallest value that can enter the spectrum at level m + 1 without being a
// branch-0 descendant of a level-m value.
inline double smallest_new_value(const std::vector<EigenvaluePair>& level_spectrum,
                                 const DecimationConfig& config, int next_level) {
  const auto coeffs = coeffs_as_double(config);
  const auto exc = exceptional_values(config);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [z, mult] : level_spectrum) {
    const auto w = preimages(coeffs, z);
    for (std::size_t b = 1; b < w.size(); ++b) {
      if (!is_exceptional(exc, w[b]) && config.branch_factors[b] > 0) best = std::min(best, w[b]);
    }
  }
  for (const auto& rule : config.births) {
    if (next_level >= rule.from_level) best = std::min(best, rule.value.value());
  }
  return best;
}

}  // namespace detail

struct FractalSpectrumResult {
  SpectrumBatch batch;
  std::vector<ExceptionalHit> exceptional_hits;
  /// Every eigenvalue <= certified_cutoff is present in `batch`.
  double certified_cutoff = 0.0;
};

/// Renormalized limits λ = τ^L · lim_k τ^k φ_0^k(z) of the level-L graph
/// spectrum, restricted to the range in which the list is provably complete.
///
/// The tail constant comes from the level counts: every eigenvalue below the
/// level-m cutoff is the limit of a distinct level-m graph eigenvalue, so
/// N(λ) <= T_m on (Λ_{m-1}, Λ_m] where T_m is the level-m total multiplicity.
inline FractalSpectrumResult fractal_spectrum_complete(int levels, const DecimationConfig& config,
                                                       const FractalModel& model) {
  auto graph = decimation_graph_spectrum(levels, config, model);
  const double tau = config.renorm_factor.value();
  const double level_scale = std::pow(tau, levels);

  std::vector<EigenvaluePair> raw;
  std::vector<std::pair<double, double>> steps;  // (value, step)
  for (std::size_t i = 0; i < graph.batch.pairs.size(); ++i) {
    const auto& [z, mult] = graph.batch.pairs[i];
    const auto trace = renormalized_limit(z, config);
    if (!trace.value) {
      graph.exceptional_hits.push_back({levels + 1, z, std::numeric_limits<double>::quiet_NaN()});
      continue;
    }
    if (!trace.converged) {
      throw ConvergenceError("fractal_spectrum: level-" + std::to_string(levels) +
                             " eigenvalue index " + std::to_string(i) + " (z = " +
                             std::to_string(z) + ") did not converge within " +
                             std::to_string(config.max_levels) + " levels");
    }
    raw.push_back({level_scale * *trace.value, mult});
    steps.emplace_back(level_scale * *trace.value, level_scale * trace.last_step);
  }
  std::sort(steps.begin(), steps.end());

  const double z_new = detail::smallest_new_value(graph.batch.pairs, config, levels + 1);
  const auto limit_new = renormalized_limit(z_new, config);
  if (!limit_new.value) throw ConfigError("fractal_spectrum: cannot bound newly generated values");
  const double cutoff = std::pow(tau, levels + 1) * *limit_new.value;

  std::vector<EigenvaluePair> pairs;
  std::vector<double> pair_steps;
  std::size_t s = 0;
  for (const auto& p : cluster_pairs(std::move(raw), 0.0, 1e-12)) {
    if (p.value > cutoff) break;
    pairs.push_back(p);
    double step = 0.0;
    while (s < steps.size() && steps[s].first <= p.value * (1.0 + 1e-12)) {
      step = std::max(step, steps[s].second);
      ++s;
    }
    pair_steps.push_back(step);
  }

  // Tail constant: sup over m > L of T_m / Λ_{m-1}^p, T_m bounded by the
  // multiplicity recursion and Λ_m by the smallest possible new value.
  const double p = std::log(static_cast<double>(model.N)) / std::log(model.tau);
  double branch_sum = 0.0;
  for (auto f : config.branch_factors) branch_sum += static_cast<double>(f);
  double sup_value = 0.0;
  for (const auto& q : graph.batch.pairs) sup_value = std::max(sup_value, q.value);
  for (const auto& rule : config.births) sup_value = std::max(sup_value, rule.value.value());
  double z_glob = z_new;
  {
    const auto coeffs = detail::coeffs_as_double(config);
    for (double z : {0.0, sup_value}) {
      const auto w = detail::preimages(coeffs, z);
      for (std::size_t b = 1; b < w.size(); ++b) z_glob = std::min(z_glob, w[b]);
    }
    for (const auto& rule : config.births) z_glob = std::min(z_glob, rule.value.value());
  }
  const auto limit_glob = renormalized_limit(z_glob, config);
  const double phi_glob = limit_glob.value ? *limit_glob.value : *limit_new.value;
  double total = static_cast<double>(graph.batch.total_multiplicity());
  double prev_cutoff = cutoff;
  double c = static_cast<double>(graph.batch.total_multiplicity()) / std::pow(cutoff, p);
  for (int m = levels + 1; m <= levels + 400; ++m) {
    double births = 0.0;
    for (const auto& rule : config.births) {
      if (m >= rule.from_level) {
        const double e = m + rule.shift;
        births += (static_cast<double>(rule.coef) * std::pow(static_cast<double>(rule.base), e) +
                   static_cast<double>(rule.add)) / static_cast<double>(rule.div);
      }
    }
    total = branch_sum * total + births;
    c = std::max(c, total / std::pow(prev_cutoff, p));
    prev_cutoff = std::pow(tau, m + 1) * phi_glob;
    if (!std::isfinite(total) || !std::isfinite(prev_cutoff)) break;
  }

  FractalSpectrumResult result;
  result.certified_cutoff = cutoff;
  result.exceptional_hits = std::move(graph.exceptional_hits);
  result.batch = make_batch(std::move(pairs), model, p, c);
  result.batch.cutoff = cutoff;
  result.batch.convergence_steps = std::move(pair_steps);
  return result;
}

/// First M renormalized-limit eigenvalues (pair form). Fails, naming the
/// index, when level `levels` does not certify M of them.
inline SpectrumBatch fractal_spectrum(int levels, std::size_t M, const DecimationConfig& config,
                                      const FractalModel& model) {
  if (M < 1) throw ConfigError("fractal_spectrum: M must be >= 1");
  auto full = fractal_spectrum_complete(levels, config, model);
  if (full.batch.pairs.size() < M) {
    throw ConvergenceError("fractal_spectrum: eigenvalue index " +
                           std::to_string(full.batch.pairs.size()) +
                           " is not certified at level " + std::to_string(levels) +
                           "; increase levels");
  }
  SpectrumBatch out = full.batch;
  out.pairs.resize(M);
  out.convergence_steps.resize(M);
  out.cutoff = out.pairs.back().value;
  return out;
}

}  // namespace fraczeta

#endif  // FRACZETA_DECIMATION_HPP
