#ifndef FRACZETA_POLES_HPP
#define FRACZETA_POLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fraczeta/error.hpp"
#include "fraczeta/model.hpp"
#include "fraczeta/oscillation.hpp"
#include "fraczeta/quadrature.hpp"
#include "fraczeta/special.hpp"
#include "fraczeta/zeta.hpp"

namespace fraczeta {

/// Rectangle re_lo < Re s < re_hi, im_lo <= Im s <= im_hi.
struct Region {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  [[nodiscard]] bool contains(cplx s) const {
    return s.real() > re_lo && s.real() < re_hi && s.imag() >= im_lo && s.imag() <= im_hi;
  }
};

enum class PoleSource { predicted, located };

inline std::string to_string(PoleSource s) { return s == PoleSource::predicted ? "predicted" : "located"; }

struct PoleEstimate {
  cplx position;
  int m = 0;
  int n = 0;
  int k_index = 0;
  std::optional<cplx> residue;
  PoleSource source = PoleSource::predicted;
  double match_distance = std::numeric_limits<double>::quiet_NaN();
  /// Set when the candidate's residue is below the numeric floor.
  bool residue_vanishes = false;
};

/// Lattice points 2 d_k / d_w - 2m + 4πin / log τ inside `region`. Lemma mode
/// lists the leading tower only; expbounds mode every declared tower. The
/// m > 0 shifts appear only for γ != 0.
inline std::vector<PoleEstimate> predicted_poles(const FractalModel& model, const Region& region, double gamma,
                                                 ContinuationMode mode = ContinuationMode::lemma) {
  std::vector<PoleEstimate> out;
  const auto dims = model.tower_dims();
  const std::size_t towers = mode == ContinuationMode::lemma ? 1 : dims.size();
  const double spacing = model.lattice_spacing();
  const int n_lo = static_cast<int>(std::ceil(region.im_lo / spacing - 1e-12));
  const int n_hi = static_cast<int>(std::floor(region.im_hi / spacing + 1e-12));
  for (std::size_t k = 0; k < towers; ++k) {
    const double top = 2.0 * dims[k] / model.d_w;
    for (int m = 0;; ++m) {
      const double re = top - 2.0 * m;
      if (re <= region.re_lo) break;
      if (re < region.re_hi) {
        for (int n = n_lo; n <= n_hi; ++n) {
          PoleEstimate p;
          p.position = {re, spacing * n};
          p.m = m;
          p.n = n;
          p.k_index = static_cast<int>(k);
          if (region.contains(p.position)) out.push_back(p);
        }
      }
      if (gamma == 0.0) break;
    }
  }
  return out;
}

/// Residue 2 g_n / Γ(a + iω_n) of the tower's pole at s = 2a + 4πin / log τ,
/// from term-by-term Mellin integration of the Fourier series.
inline PoleEstimate residue_from_oscillation(const OscillationProfile& profile, const FractalModel& model, int n) {
  const double omega = 2.0 * std::numbers::pi * n / model.period();
  PoleEstimate p;
  p.position = {2.0 * profile.exponent, 2.0 * omega};
  p.n = n;
  p.k_index = profile.k_index;
  p.source = PoleSource::predicted;
  const cplx g = profile.g(n);
  const double floor = std::max(1e-10 * std::abs(profile.g(0)), 10.0 * profile.fit_residual);
  const cplx r = 2.0 * g * rgamma(cplx(profile.exponent, omega));
  if (std::abs(g) <= floor || r == cplx{0.0, 0.0}) {
    p.residue_vanishes = true;
  } else {
    p.residue = r;
  }
  return p;
}

struct LocateOptions {
  double edge_clearance = 1e-4;  // contours keep at least this distance from candidates
  int perturb_retries = 3;
  double max_panel = 0.25;
  double residue_floor = 1e-7;
  int max_depth = 8;
};

namespace detail {

struct ContourResult {
  cplx m0;
  cplx m1;
  cplx m2;
  int winding = 0;
};

// Moments (1/2πi)∮ s^j f ds for j = 0,1,2 with composite Gauss–Legendre on
// each edge, plus the winding number of f from adaptive argument tracking.
inline ContourResult contour(const std::function<cplx(cplx)>& f, const Region& r,
                             const std::vector<cplx>& candidates, const LocateOptions& opt) {
  const std::array<cplx, 5> corner{cplx(r.re_lo, r.im_lo), cplx(r.re_hi, r.im_lo), cplx(r.re_hi, r.im_hi),
                                   cplx(r.re_lo, r.im_hi), cplx(r.re_lo, r.im_lo)};
  ContourResult out;
  double total_arg = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corner[e];
    const cplx b = corner[e + 1];
    const double len = std::abs(b - a);
    double clearance = std::numeric_limits<double>::infinity();
    for (const cplx& c : candidates) {
      const double tpar = std::clamp(((c - a) * std::conj(b - a)).real() / (len * len), 0.0, 1.0);
      clearance = std::min(clearance, std::abs(a + tpar * (b - a) - c));
    }
    const double width = std::clamp(0.5 * clearance, 1e-3, opt.max_panel);
    const auto rule = composite_gauss_legendre(0.0, 1.0, panels_for(0.0, len, width));
    const cplx dir = b - a;
    cplx prev_val = f(a);
    double prev_t = 0.0;
    auto track = [&](auto&& self, double t0, cplx f0, double t1, cplx f1, int depth) -> double {
      const double d = std::arg(f1 / f0);
      if (std::abs(d) < 0.5 || depth > 24) return d;
      const double tm = 0.5 * (t0 + t1);
      const cplx fm = f(a + tm * dir);
      return self(self, t0, f0, tm, fm, depth + 1) + self(self, tm, fm, t1, f1, depth + 1);
    };
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double t = rule.nodes[i];
      const cplx s = a + t * dir;
      const cplx v = f(s);
      const cplx w = rule.weights[i] * dir * v;
      out.m0 += w;
      out.m1 += w * s;
      out.m2 += w * s * s;
      total_arg += track(track, prev_t, prev_val, t, v, 0);
      prev_t = t;
      prev_val = v;
    }
    total_arg += track(track, prev_t, prev_val, 1.0, f(b), 0);
  }
  const cplx scale = 1.0 / cplx(0.0, 2.0 * std::numbers::pi);
  out.m0 *= scale;
  out.m1 *= scale;
  out.m2 *= scale;
  out.winding = static_cast<int>(std::lround(total_arg / (2.0 * std::numbers::pi)));
  return out;
}

}  // namespace detail

/// Poles of the continued ζ(·, γ) inside `region`, found cell by cell: cells
/// are split until each holds at most one lattice candidate, then the contour
/// moments give position M1/M0 and residue M0. Each located pole is matched to
/// the nearest lattice point.
inline std::vector<PoleEstimate> locate_poles(const MellinContinuation& engine, Region region, double gamma,
                                              const LocateOptions& opt = {}) {
  const auto& model = engine.model();
  if (!engine.domain().contains(cplx(region.re_lo, 0.0))) {
    throw DomainError("locate_poles: region leaves the continuation domain");
  }
  if (!(region.re_hi > region.re_lo) || !(region.im_hi >= region.im_lo)) {
    throw DomainError("locate_poles: empty region");
  }
  // Every tower of the fitted expansion can carry poles, so all of them
  // guide the subdivision.
  auto lattice = [&](const Region& r) {
    Region wide = r;
    wide.re_lo -= 1.0;
    wide.re_hi += 1.0;
    wide.im_lo -= model.lattice_spacing();
    wide.im_hi += model.lattice_spacing();
    return predicted_poles(model, wide, gamma, ContinuationMode::expbounds);
  };
  const auto all = lattice(region);

  // Move edges off candidates: real edges inward (open), imaginary edges outward (closed).
  for (int attempt = 0;; ++attempt) {
    bool clear = true;
    for (const auto& c : all) {
      const cplx p = c.position;
      const bool in_im = p.imag() >= region.im_lo - opt.edge_clearance && p.imag() <= region.im_hi + opt.edge_clearance;
      const bool in_re = p.real() >= region.re_lo - opt.edge_clearance && p.real() <= region.re_hi + opt.edge_clearance;
      const double step = opt.edge_clearance * 10.0 * (attempt + 1);
      if (in_im && std::abs(p.real() - region.re_lo) < opt.edge_clearance) { region.re_lo += step; clear = false; }
      if (in_im && std::abs(p.real() - region.re_hi) < opt.edge_clearance) { region.re_hi -= step; clear = false; }
      if (in_re && std::abs(p.imag() - region.im_lo) < opt.edge_clearance) { region.im_lo -= step; clear = false; }
      if (in_re && std::abs(p.imag() - region.im_hi) < opt.edge_clearance) { region.im_hi += step; clear = false; }
    }
    if (clear) break;
    if (attempt >= opt.perturb_retries) {
      throw ConvergenceError("locate_poles: contour stays within clearance of a candidate after retries");
    }
  }

  const std::function<cplx(cplx)> f = [&](cplx s) { return engine.evaluate(s, gamma).value; };
  std::vector<PoleEstimate> found;

  std::function<void(const Region&, int)> process = [&](const Region& cell, int depth) {
    std::vector<cplx> inside;
    std::vector<cplx> near;
    for (const auto& c : all) {
      const cplx p = c.position;
      if (p.real() > cell.re_lo && p.real() < cell.re_hi && p.imag() > cell.im_lo && p.imag() < cell.im_hi) {
        inside.push_back(p);
      }
      near.push_back(p);
    }
    if (inside.size() > 1) {
      // Split midway between the two most separated candidates along the wider spread.
      double re_min = inside[0].real(), re_max = re_min, im_min = inside[0].imag(), im_max = im_min;
      for (const cplx& p : inside) {
        re_min = std::min(re_min, p.real());
        re_max = std::max(re_max, p.real());
        im_min = std::min(im_min, p.imag());
        im_max = std::max(im_max, p.imag());
      }
      Region a = cell;
      Region b = cell;
      if (re_max - re_min >= im_max - im_min) {
        double cut = 0.5 * (re_min + re_max);
        double best = std::numeric_limits<double>::infinity();
        for (const cplx& p : inside) {
          if (std::abs(p.real() - cut) < best) best = std::abs(p.real() - cut);
        }
        if (best < opt.edge_clearance) cut += 0.25 * (re_max - re_min) / static_cast<double>(inside.size());
        a.re_hi = cut;
        b.re_lo = cut;
      } else {
        // Candidates share a lattice column; cut between neighbouring rows.
        std::vector<double> ims;
        for (const cplx& p : inside) ims.push_back(p.imag());
        std::sort(ims.begin(), ims.end());
        const std::size_t mid = ims.size() / 2;
        const double cut = 0.5 * (ims[mid - 1] + ims[mid]);
        a.im_hi = cut;
        b.im_lo = cut;
      }
      process(a, depth + 1);
      process(b, depth + 1);
      return;
    }
    const auto c = detail::contour(f, cell, near, opt);
    if (std::abs(c.m0) < opt.residue_floor) {
      if (c.winding < 0 && depth < opt.max_depth) {
        // A pole the lattice does not predict: quarter the cell and look again.
        const double rm = 0.5 * (cell.re_lo + cell.re_hi);
        const double im = 0.5 * (cell.im_lo + cell.im_hi);
        process({cell.re_lo, rm, cell.im_lo, im}, depth + 1);
        process({rm, cell.re_hi, cell.im_lo, im}, depth + 1);
        process({cell.re_lo, rm, im, cell.im_hi}, depth + 1);
        process({rm, cell.re_hi, im, cell.im_hi}, depth + 1);
      }
      return;
    }
    const cplx pos = c.m1 / c.m0;
    const bool single = std::abs(c.m2 / c.m0 - pos * pos) < 1e-6 * (1.0 + std::norm(pos));
    if (!single && inside.empty() && depth < opt.max_depth) {
      const double rm = 0.5 * (cell.re_lo + cell.re_hi);
      const double im = 0.5 * (cell.im_lo + cell.im_hi);
      process({cell.re_lo, rm, cell.im_lo, im}, depth + 1);
      process({rm, cell.re_hi, cell.im_lo, im}, depth + 1);
      process({cell.re_lo, rm, im, cell.im_hi}, depth + 1);
      process({rm, cell.re_hi, im, cell.im_hi}, depth + 1);
      return;
    }
    PoleEstimate p;
    p.position = pos;
    p.residue = c.m0;
    p.source = PoleSource::located;
    found.push_back(p);
  };
  process(region, 0);

  for (auto& p : found) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : all) {
      const double d = std::abs(c.position - p.position);
      if (d < best) {
        best = d;
        p.m = c.m;
        p.n = c.n;
        p.k_index = c.k_index;
      }
    }
    p.match_distance = best;
  }
  // Order by imaginary part on a 1e-6 grid, then by real part, so round-off
  // around Im = 0 does not reorder poles on the real axis.
  auto key = [](const PoleEstimate& p) { return std::llround(p.position.imag() * 1e6); };
  std::sort(found.begin(), found.end(), [&](const PoleEstimate& a, const PoleEstimate& b) {
    if (key(a) != key(b)) return key(a) < key(b);
    return a.position.real() < b.position.real();
  });
  return found;
}

}  // namespace fraczeta

#endif  // FRACZETA_POLES_HPP
