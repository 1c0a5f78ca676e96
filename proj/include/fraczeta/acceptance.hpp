#ifndef FRACZETA_ACCEPTANCE_HPP
#define FRACZETA_ACCEPTANCE_HPP

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fraczeta/decimation.hpp"
#include "fraczeta/functional.hpp"
#include "fraczeta/graph.hpp"
#include "fraczeta/io.hpp"
#include "fraczeta/oracle/riemann.hpp"
#include "fraczeta/oscillation.hpp"
#include "fraczeta/partition.hpp"
#include "fraczeta/poles.hpp"
#include "fraczeta/zeta.hpp"

namespace fraczeta::acceptance {

// Pinned tolerances.
inline constexpr double kRiemannTol = 1e-4;
inline constexpr double kRiemannExclusion = 0.05;
inline constexpr double kRiemannSeconds = 120.0;
inline constexpr double kPoleTol = 1e-3;
inline constexpr double kToyValueTol = 1e-6;
inline constexpr double kDecimationTol = 1e-9;
inline constexpr double kWeylRelTol = 1e-2;
inline constexpr double kRatioRelTol = 0.10;
inline constexpr double kDirectFormTol = 1e-6;
inline constexpr double kPaperFormTol = 1e-6;
inline constexpr double kTailTMax = 20.0;
inline constexpr int kOverlapPoints = 100;
inline constexpr double kSpacingLiteral = 7.808556;  // 4π/log 5 as commonly quoted

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  json measured;
};

/// Spectra and continuations shared by the criteria; built once.
class Fixtures {
 public:
  Fixtures()
      : interval_cfg_(preset_config("interval")),
        toy_cfg_(preset_config("toy")),
        gasket_cfg_(preset_config("gasket")),
        interval_(build_spectrum(interval_cfg_), interval_cfg_.model, interval_cfg_.continuation),
        toy_(build_spectrum(toy_cfg_), toy_cfg_.model, toy_cfg_.continuation),
        gasket_(build_spectrum(gasket_cfg_), gasket_cfg_.model, gasket_cfg_.continuation) {}

  const RunConfig& interval_config() const { return interval_cfg_; }
  const RunConfig& toy_config() const { return toy_cfg_; }
  const RunConfig& gasket_config() const { return gasket_cfg_; }
  const SpectralZeta& interval() const { return interval_; }
  const SpectralZeta& toy() const { return toy_; }
  const SpectralZeta& gasket() const { return gasket_; }

 private:
  RunConfig interval_cfg_;
  RunConfig toy_cfg_;
  RunConfig gasket_cfg_;
  SpectralZeta interval_;
  SpectralZeta toy_;
  SpectralZeta gasket_;
};

namespace detail {

inline std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

// Uniform [0, 1) from a fixed-seed generator, independent of the standard
// library's distribution implementation.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : state_(seed) {}
  double operator()() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline std::vector<ZetaPoint> riemann_grid(const MellinContinuation& e) {
  std::vector<ZetaPoint> out;
  for (int a = 2; a <= 30; ++a) {
    for (int b = -20; b <= 20; ++b) {
      const cplx s(0.1 * a, 0.5 * b);
      if (std::abs(s - 1.0) < kRiemannExclusion) continue;
      out.push_back(e.evaluate(s, 0.0));
    }
  }
  return out;
}

}  // namespace detail

inline CriterionResult criterion_riemann(const Fixtures& fx) {
  CriterionResult r{1, "interval zeta vs pi^-s zeta_R(s)", false, "", json::object()};
  const auto t0 = std::chrono::steady_clock::now();
  const auto pts = detail::riemann_grid(fx.interval().engine());
  double worst = 0.0;
  for (const auto& z : pts) worst = std::max(worst, std::abs(z.value - oracle::interval_zeta(z.s)));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = worst <= kRiemannTol && secs < kRiemannSeconds && pts.size() == 29 * 41 - 1;
  r.detail = "max |err| " + detail::sci(worst) + " (tol 1e-4) over " + std::to_string(pts.size()) +
             " points in " + detail::sci(secs) + " s";
  r.measured = {{"max_error", worst}, {"points", pts.size()}};
  return r;
}

inline CriterionResult criterion_interval_pole(const Fixtures& fx) {
  CriterionResult r{2, "interval pole at s = 1", false, "", json::object()};
  const auto poles = locate_poles(fx.interval().engine(), {0.5, 1.5, -2.0, 2.0}, 0.0);
  double dpos = std::numeric_limits<double>::infinity();
  double dres = std::numeric_limits<double>::infinity();
  if (poles.size() == 1) {
    dpos = std::abs(poles[0].position - 1.0);
    dres = std::abs(*poles[0].residue - 1.0 / std::numbers::pi);
  }
  r.passed = poles.size() == 1 && dpos <= kPoleTol && dres <= kPoleTol;
  r.detail = std::to_string(poles.size()) + " pole(s); |pos - 1| " + detail::sci(dpos) + ", |res - 1/pi| " +
             detail::sci(dres) + " (tol 1e-3)";
  r.measured = {{"count", poles.size()}, {"position_error", dpos}, {"residue_error", dres}};
  return r;
}

inline CriterionResult criterion_toy_lattice(const Fixtures& fx) {
  CriterionResult r{3, "toy (3,5) pole lattice and closed form", false, "", json::object()};
  const auto& e = fx.toy().engine();
  const auto& m = e.model();
  const double spacing = 4.0 * std::numbers::pi / std::log(5.0);
  const auto poles = locate_poles(e, {m.d_S - 0.5, m.d_S + 0.5, -10.0, 10.0}, 0.0);
  double dpos = 0.0;
  double dlit = 0.0;
  double dres = 0.0;
  bool matched = poles.size() == 3;
  for (std::size_t i = 0; matched && i < 3; ++i) {
    const int n = static_cast<int>(i) - 1;
    dpos = std::max(dpos, std::abs(poles[i].position - cplx(m.d_S, spacing * n)));
    dlit = std::max(dlit, std::abs(poles[i].position - cplx(m.d_S, kSpacingLiteral * n)));
    dres = std::max(dres, std::abs(*poles[i].residue - 2.0 / std::log(5.0)));
  }
  double dval = 0.0;
  for (int i = 0; i < 50; ++i) {
    const cplx s(0.2 + 0.06 * i, -9.0 + 0.37 * i);
    dval = std::max(dval, std::abs(e.evaluate(s, 0.0).value - oracle::geometric_zeta(3, 5.0, s)));
  }
  r.passed = matched && dpos <= kPoleTol && dlit <= kPoleTol && dres <= kPoleTol && dval <= kToyValueTol;
  r.detail = std::to_string(poles.size()) + " poles; position err " + detail::sci(dpos) + " (vs 7.808556 n: " +
             detail::sci(dlit) + "), residue err " + detail::sci(dres) + ", closed-form err " + detail::sci(dval) +
             " at 50 points";
  r.measured = {{"count", poles.size()}, {"position_error", dpos}, {"literal_position_error", dlit},
                {"residue_error", dres}, {"value_error", dval}};
  return r;
}

inline CriterionResult criterion_decimation() {
  CriterionResult r{4, "decimation vs dense eigensolve, levels 1-4", false, "", json::object()};
  const auto model = presets::gasket();
  const auto cfg = gasket_decimation();
  bool ok = true;
  double worst = 0.0;
  json per_level = json::array();
  for (int level = 1; level <= 4; ++level) {
    const auto dec = decimation_graph_spectrum(level, cfg, model).batch;
    const auto dense = dense_graph_spectrum(level, model);
    const bool same_shape = dec.pairs.size() == dense.pairs.size() &&
                            dec.total_multiplicity() == dense.total_multiplicity();
    ok = ok && same_shape;
    for (std::size_t i = 0; same_shape && i < dec.pairs.size(); ++i) {
      worst = std::max(worst, std::abs(dec.pairs[i].value - dense.pairs[i].value));
      ok = ok && dec.pairs[i].multiplicity == dense.pairs[i].multiplicity;
    }
    per_level.push_back({{"level", level}, {"pairs", dec.pairs.size()}, {"total", dec.total_multiplicity()}});
  }
  r.passed = ok && worst <= kDecimationTol;
  r.detail = "max |diff| " + detail::sci(worst) + " (tol 1e-9), multiplicities " + (ok ? "match" : "differ");
  r.measured = {{"max_difference", worst}, {"levels", per_level}};
  return r;
}

inline CriterionResult criterion_weyl(const Fixtures& fx) {
  CriterionResult r{5, "gasket Weyl ratio periodicity", false, "", json::object()};
  const auto& batch = fx.gasket().batch();
  const auto& model = fx.gasket_config().model;
  const double lo = std::pow(5.0, -8);
  const double hi = std::pow(5.0, -7);
  double sup_w = 0.0;
  double sup_d = 0.0;
  bool accepted = true;
  for (int i = 0; i < 400; ++i) {
    const double t = lo * std::pow(hi / lo, i / 399.0);
    const auto a = partition_value(batch, t);
    const auto b = partition_value(batch, 5.0 * t);
    accepted = accepted && a.accepted && b.accepted;
    const double wa = weyl_ratio(batch, t);
    const double wb = weyl_ratio(batch, 5.0 * t);
    sup_w = std::max({sup_w, wa, wb});
    sup_d = std::max(sup_d, std::abs(wa - wb));
  }
  const auto p1 = fit_towers(batch, model, lo);
  const auto p2 = fit_towers(batch, model, hi);
  const double q1 = std::abs(p1[0].g(1)) / p1[0].g(0).real();
  const double q2 = std::abs(p2[0].g(1)) / p2[0].g(0).real();
  const double rel = std::abs(q1 - q2) / std::max(q1, q2);
  r.passed = accepted && sup_d <= kWeylRelTol * sup_w && rel <= kRatioRelTol;
  r.detail = "sup|W(t)-W(5t)| " + detail::sci(sup_d) + " vs 1e-2 sup W = " + detail::sci(kWeylRelTol * sup_w) +
             "; |g1|/g0 " + detail::sci(q1) + " and " + detail::sci(q2) + " (rel diff " + detail::sci(rel) + ")";
  r.measured = {{"sup_difference", sup_d}, {"sup_weyl", sup_w}, {"ratio_period_1", q1}, {"ratio_period_2", q2}};
  return r;
}

inline CriterionResult criterion_functional(const Fixtures& fx) {
  CriterionResult r{6, "gamma-derivative relation", false, "", json::object()};
  const std::vector<std::pair<cplx, double>> samples{
      {{3.0, 0.0}, 0.25}, {{3.0, 0.0}, 0.5},  {{3.0, 0.0}, 1.0},   {{2.5, 1.0}, 0.25}, {{1.5, 2.0}, 0.5},
      {{1.5, 2.0}, 1.0},  {{0.5, -3.0}, 0.25}, {{0.7, 0.0}, 0.5},  {{4.0, -2.0}, 1.0}, {{2.0, 5.0}, 0.5}};
  double worst = 0.0;
  double paper_min = std::numeric_limits<double>::infinity();
  int count = 0;
  for (const SpectralZeta* z : {&fx.interval(), &fx.toy()}) {
    for (const auto& [s, g] : samples) {
      const auto res = functional_eq_residual(*z, s, g);
      worst = std::max(worst, res.direct_form);
      paper_min = std::min(paper_min, res.paper_form);
      ++count;
    }
  }
  const auto one = functional_eq_residual(make_batch({{1.0, 1}}), 3.0, 0.5);
  const double expected = std::pow(1.5, -2.5);
  const double dpaper = std::abs(one.paper_form - expected);
  r.passed = count == 20 && worst < kDirectFormTol && dpaper <= kPaperFormTol;
  r.detail = std::to_string(count) + " points: max direct_form " + detail::sci(worst) +
             " (tol 1e-6), min paper_form " + detail::sci(paper_min) + "; single eigenvalue paper_form " +
             detail::sci(one.paper_form) + " vs 1.5^-2.5 (diff " + detail::sci(dpaper) + ")";
  r.measured = {{"max_direct_form", worst}, {"min_paper_form", paper_min}, {"single_paper_form", one.paper_form}};
  return r;
}

inline CriterionResult criterion_tail(const Fixtures& fx) {
  CriterionResult r{7, "exponential tail certificate on [1, 20]", false, "", json::object()};
  const auto ci = tail_certificate(fx.interval().batch(), kTailTMax);
  const auto cg = tail_certificate(fx.gasket().batch(), kTailTMax);
  const bool ok_i = ci.verified && ci.c4 == fx.interval().batch().lambda_min && ci.c3 >= 1.0 && ci.c3 <= 1.1;
  const bool ok_g = cg.verified && cg.c4 == fx.gasket().batch().lambda_min;
  r.passed = ok_i && ok_g;
  r.detail = "interval c3 " + detail::sci(ci.c3) + " c4 " + detail::sci(ci.c4) + (ci.verified ? " verified" : " FAILED") +
             "; gasket c3 " + detail::sci(cg.c3) + " c4 " + detail::sci(cg.c4) + (cg.verified ? " verified" : " FAILED");
  r.measured = {{"interval", {{"c3", ci.c3}, {"c4", ci.c4}}}, {"gasket", {{"c3", cg.c3}, {"c4", cg.c4}}}};
  return r;
}

inline CriterionResult criterion_overlap(const Fixtures& fx) {
  CriterionResult r{8, "continued vs direct on Re(s) >= d_S + 0.5", false, "", json::object()};
  detail::Uniform u(20240601);
  int violations = 0;
  double worst_ratio = 0.0;
  const SpectralZeta* models[] = {&fx.interval(), &fx.toy(), &fx.gasket()};
  for (int i = 0; i < kOverlapPoints; ++i) {
    const SpectralZeta& z = *models[i % 3];
    const double ds = z.engine().model().d_S;
    const cplx s(ds + 0.5 + 2.5 * u(), -10.0 + 20.0 * u());
    const double g = u();
    const auto c = z.engine().evaluate(s, g);
    const auto d = zeta_direct(z.batch(), s, g);
    const double diff = std::abs(c.value - d.value);
    const double bound = c.error_bound + d.error_bound;
    if (!(diff <= bound)) ++violations;
    worst_ratio = std::max(worst_ratio, diff / bound);
  }
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " violations in " + std::to_string(kOverlapPoints) +
             " points; max |diff|/bound " + detail::sci(worst_ratio);
  r.measured = {{"violations", violations}, {"max_ratio", worst_ratio}};
  return r;
}

/// Artifacts written by `check`: grid values, pole reports and the spectrum
/// used for the gasket criteria. Written through `set`.
inline void write_check_artifacts(const Fixtures& fx, ArtifactSet& set) {
  set.write("interval_zeta_grid.csv", zeta_csv(detail::riemann_grid(fx.interval().engine())));
  set.write("interval_poles.json", poles_json(build_pole_report(fx.interval_config().model, &fx.interval().engine(), {0.5, 1.5, -2.0, 2.0}, 0.0, ContinuationMode::lemma)));
  const auto& tm = fx.toy_config().model;
  set.write("toy_poles.json", poles_json(build_pole_report(tm, &fx.toy().engine(), {tm.d_S - 0.5, tm.d_S + 0.5, -10.0, 10.0}, 0.0, ContinuationMode::lemma)));
  set.write("gasket_spectrum.csv", spectrum_csv(fx.gasket().batch()));
  set.write("gasket_spectrum.meta.json", spectrum_meta_json(fx.gasket().batch()));
  set.write("gasket_profiles.json", profiles_json(fx.gasket().engine().profiles()));
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline CriterionResult criterion_determinism(const Fixtures& fx, const std::filesystem::path& scratch) {
  CriterionResult r{9, "byte-identical artifacts across runs", false, "", json::object()};
  const auto a = scratch / "run_a";
  const auto b = scratch / "run_b";
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  {
    ArtifactSet set(a);
    write_check_artifacts(fx, set);
    set.commit();
  }
  {
    // Second run from freshly built fixtures.
    const Fixtures again;
    ArtifactSet set(b);
    write_check_artifacts(again, set);
    set.commit();
  }
  int files = 0;
  int differ = 0;
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    ++files;
    if (read_file(entry.path()) != read_file(b / entry.path().filename())) ++differ;
  }
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  r.passed = files > 0 && differ == 0;
  r.detail = std::to_string(files) + " artifact files, " + std::to_string(differ) + " differ";
  r.measured = {{"files", files}, {"differing", differ}};
  return r;
}

/// Runs criteria 1-9. Scratch files for criterion 9 go under `scratch`.
inline std::vector<CriterionResult> run_acceptance(const Fixtures& fx, const std::filesystem::path& scratch) {
  std::vector<CriterionResult> out;
  auto guarded = [&](int id, const std::string& name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({id, name, false, std::string("error: ") + e.what(), json::object()});
    }
  };
  guarded(1, "interval zeta vs pi^-s zeta_R(s)", [&] { return criterion_riemann(fx); });
  guarded(2, "interval pole at s = 1", [&] { return criterion_interval_pole(fx); });
  guarded(3, "toy (3,5) pole lattice and closed form", [&] { return criterion_toy_lattice(fx); });
  guarded(4, "decimation vs dense eigensolve, levels 1-4", [] { return criterion_decimation(); });
  guarded(5, "gasket Weyl ratio periodicity", [&] { return criterion_weyl(fx); });
  guarded(6, "gamma-derivative relation", [&] { return criterion_functional(fx); });
  guarded(7, "exponential tail certificate on [1, 20]", [&] { return criterion_tail(fx); });
  guarded(8, "continued vs direct on Re(s) >= d_S + 0.5", [&] { return criterion_overlap(fx); });
  guarded(9, "byte-identical artifacts across runs", [&] { return criterion_determinism(fx, scratch); });
  return out;
}

inline std::string format_line(const CriterionResult& c) {
  return std::string(c.passed ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) + " [" + c.name + "] " + c.detail;
}

/// Summary artifact: measured values only, nothing time-dependent.
inline std::string summary_json(const std::vector<CriterionResult>& results) {
  json j = json::array();
  for (const auto& c : results) {
    json m = c.measured;
    if (c.id == 1) m.erase("seconds");
    j.push_back({{"criterion", c.id}, {"name", c.name}, {"passed", c.passed}, {"measured", m}});
  }
  return j.dump(2) + "\n";
}

}  // namespace fraczeta::acceptance

#endif  // FRACZETA_ACCEPTANCE_HPP
