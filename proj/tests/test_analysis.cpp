#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fraczeta/fraczeta.hpp"
#include "fraczeta/oracle/riemann.hpp"

using namespace fraczeta;

namespace {

// Built once; construction of each engine takes well under a second.
const SpectralZeta& interval_zeta() {
  static const SpectralZeta z = [] {
    const auto c = preset_config("interval");
    return SpectralZeta(build_spectrum(c), c.model, c.continuation);
  }();
  return z;
}

const SpectralZeta& toy_zeta() {
  static const SpectralZeta z = [] {
    const auto c = preset_config("toy");
    return SpectralZeta(build_spectrum(c), c.model, c.continuation);
  }();
  return z;
}

const SpectralZeta& gasket_zeta() {
  static const SpectralZeta z = [] {
    const auto c = preset_config("gasket");
    return SpectralZeta(build_spectrum(c), c.model, c.continuation);
  }();
  return z;
}

SpectralZeta interval_expbounds() {
  auto c = preset_config("interval");
  c.continuation.mode = ContinuationMode::expbounds;
  return {build_spectrum(c), c.model, c.continuation};
}

}  // namespace

// ---------------------------------------------------------------- oscillation

TEST(Oscillation, IntervalTowersAreConstants) {
  const auto& p = interval_zeta().engine().profiles();
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0].g(0).real(), 0.5 / std::sqrt(std::numbers::pi), 1e-10);
  EXPECT_NEAR(p[1].g(0).real(), -0.5, 1e-10);
  for (int n = 1; n <= p[0].n_max; ++n) EXPECT_LT(std::abs(p[0].g(n)), 1e-10);
}

TEST(Oscillation, ToyMeanMatchesGammaOverLogTau) {
  const auto& p = toy_zeta().engine().profiles();
  const double a = std::log(3.0) / std::log(5.0);
  EXPECT_NEAR(p[0].g(0).real(), std::tgamma(a) / std::log(5.0), 1e-10);
  // Higher modes: Γ(a + iω_n)/log τ with ω_n = 2πn/log 5.
  const cplx g1 = gamma(cplx(a, 2.0 * std::numbers::pi / std::log(5.0))) / std::log(5.0);
  EXPECT_NEAR(std::abs(p[0].g(1)), std::abs(g1), 1e-9);
}

TEST(Oscillation, ToyRemainderTendsToHalf) {
  // Z(t) = t^{-a} G(log(1/t)/log τ) - 1/2 + O(t): the constant comes from ζ(0) = 1/(1 - N).
  const auto& z = toy_zeta();
  const auto& p = z.engine().profiles()[0];
  for (double t : {1e-7, 3e-8}) {
    EXPECT_NEAR(p.term(t) - partition_value(z.batch(), t).value, 0.5, 1e-5);
  }
}

TEST(Oscillation, GasketGenuinelyOscillates) {
  const auto& p = gasket_zeta().engine().profiles();
  EXPECT_NEAR(p[0].g(0).real(), 0.176154935749, 1e-9);
  const double ratio = std::abs(p[0].g(1)) / p[0].g(0).real();
  EXPECT_NEAR(ratio, 0.00236523, 1e-6);
  EXPECT_NEAR(p[1].g(0).real(), -0.476090708271, 1e-8);
  EXPECT_LT(p[0].contamination, 1e-3 * p[0].g(0).real());
}

TEST(Oscillation, PeriodStable) {
  const auto& z = gasket_zeta();
  const auto& m = z.engine().model();
  const auto a = fit_towers(z.batch(), m, std::pow(5.0, -8));
  const auto b = fit_towers(z.batch(), m, std::pow(5.0, -7));
  EXPECT_NEAR(std::abs(a[0].g(1)) / std::abs(b[0].g(1)), 1.0, 1e-6);
}

TEST(Oscillation, FitWindowMustBeOnePeriod) {
  const auto& z = gasket_zeta();
  EXPECT_THROW(fit_oscillation(z.batch(), z.engine().model(), 0, 4, {1e-6, 2e-6}), Error);
}

TEST(Oscillation, RejectsTruncatedSamples) {
  const auto b = interval_spectrum(20);
  EXPECT_THROW(fit_towers(b, presets::interval(), 1e-5), DomainError);
}

TEST(Oscillation, AsymptoticCertificate) {
  const auto& z = gasket_zeta();
  const auto& m = z.engine().model();
  const auto c = asymptotic_certificate(z.batch(), m, z.engine().profiles()[0],
                                        {std::pow(5.0, -9), std::pow(5.0, -8)});
  EXPECT_TRUE(c.positive);
  EXPECT_FALSE(c.sign_change);
  EXPECT_GT(c.c1, 0.4);
  EXPECT_LT(c.c2, 0.55);
  EXPECT_LE(c.c1, c.c2);
}

// ---------------------------------------------------------------------- zeta

TEST(Zeta, DirectMatchesClosedForm) {
  const auto& z = toy_zeta();
  const cplx s(3.0, 1.5);
  const auto d = zeta_direct(z.batch(), s, 0.0);
  EXPECT_NEAR(std::abs(d.value - oracle::geometric_zeta(3, 5.0, s)), 0.0, d.error_bound + 1e-14);
  EXPECT_EQ(d.method, ZetaMethod::direct);
}

TEST(Zeta, DirectRefusesLeftOfAbscissa) {
  EXPECT_THROW(zeta_direct(interval_zeta().batch(), 0.9, 0.0), DomainError);
}

TEST(Zeta, IntervalSpecialValues) {
  const auto& e = interval_zeta().engine();
  EXPECT_NEAR(std::abs(e.evaluate(0.5, 0.0).value - (-0.82391680215736897)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(e.evaluate(2.0, 0.0).value - 1.0 / 6.0), 0.0, 1e-11);
  EXPECT_NEAR(std::abs(e.evaluate({0.7, 3.3}, 0.0).value - oracle::interval_zeta({0.7, 3.3})), 0.0, 1e-10);
}

TEST(Zeta, ErrorBoundsCoverTrueError) {
  const auto& e = interval_zeta().engine();
  for (cplx s : {cplx(0.3, 0.0), cplx(1.2, 7.5), cplx(2.9, -9.5), cplx(0.55, -0.5)}) {
    const auto p = e.evaluate(s, 0.0);
    EXPECT_LE(std::abs(p.value - oracle::interval_zeta(s)), p.error_bound) << s;
  }
}

TEST(Zeta, ExpboundsReachesNegativeHalfPlane) {
  const auto z = interval_expbounds();
  const auto& e = z.engine();
  EXPECT_NEAR(std::abs(e.evaluate(0.0, 0.0).value - (-0.5)), 0.0, 1e-9);
  const cplx s(-1.5, 2.0);
  EXPECT_NEAR(std::abs(e.evaluate(s, 0.0).value - oracle::interval_zeta(s)), 0.0, 1e-8);
  EXPECT_THROW((void)interval_zeta().engine().evaluate(s, 0.0), DomainError);
}

TEST(Zeta, RefusesPoles) {
  EXPECT_THROW((void)interval_zeta().engine().evaluate(1.0 + 1e-8, 0.0), DomainError);
}

TEST(Zeta, ToyClosedFormOffLattice) {
  const auto& e = toy_zeta().engine();
  for (cplx s : {cplx(0.25, 1.0), cplx(1.0, -3.0), cplx(2.5, 8.0)}) {
    const auto p = e.evaluate(s, 0.0);
    EXPECT_LE(std::abs(p.value - oracle::geometric_zeta(3, 5.0, s)), std::max(p.error_bound, 1e-6)) << s;
  }
}

TEST(Zeta, ContinuedAgreesWithDirectOnOverlap) {
  const auto& z = gasket_zeta();
  for (double g : {0.0, 0.5}) {
    const cplx s(z.engine().model().d_S + 0.7, 2.0);
    const auto c = z.engine().evaluate(s, g);
    const auto d = zeta_direct(z.batch(), s, g);
    EXPECT_LE(std::abs(c.value - d.value), c.error_bound + d.error_bound);
  }
}

TEST(Zeta, ShiftedSpectrumMatchesDirect) {
  const auto& z = interval_zeta();
  const cplx s(2.5, 1.0);
  const auto c = z.engine().evaluate(s, 0.75);
  const auto d = zeta_direct(z.batch(), s, 0.75);
  EXPECT_LE(std::abs(c.value - d.value), c.error_bound + d.error_bound);
}

TEST(Zeta, SplitSumsToZeta) {
  const auto& e = interval_zeta().engine();
  const auto sp = e.split(1.5, 0.0, I1Mode::closed_form);
  // ζ(3) for the interval spectrum is π^{-3} ζ_R(3).
  EXPECT_NEAR(std::abs(sp.total() - 0.0387681796029), 0.0, 1e-11);
  const auto num = mellin_split_numeric(e, 1.5, 0.0, I1Mode::numeric);
  EXPECT_NEAR(std::abs(num.total() - sp.total()), 0.0, 1e-9);
}

TEST(Zeta, DomainBounds) {
  const auto lemma = continuation_domain(presets::gasket(), ContinuationMode::lemma);
  EXPECT_DOUBLE_EQ(lemma.half_plane_bound, 0.0);
  EXPECT_TRUE(std::isnan(lemma.epsilon));
  const auto exp = continuation_domain(presets::gasket(), ContinuationMode::expbounds);
  EXPECT_TRUE(exp.contains({-50.0, 3.0}));
}

TEST(Zeta, SpectralZetaRoutes) {
  const auto& z = interval_zeta();
  EXPECT_EQ(z({0.5, 1.0}, 0.0).method, ZetaMethod::continued);
  EXPECT_EQ(SpectralZeta(interval_spectrum(100))(3.0, 0.0).method, ZetaMethod::direct);
}

// --------------------------------------------------------------------- poles

TEST(Poles, PredictedGasketLattice) {
  const auto p = predicted_poles(presets::gasket(), {0.0, 2.0, -8.0, 8.0}, 0.0);
  ASSERT_EQ(p.size(), 3u);
  for (const auto& e : p) {
    EXPECT_NEAR(e.position.real(), 1.3652123889719707, 1e-12);
    EXPECT_NEAR(e.position.imag(), 7.8079250633246856 * e.n, 1e-12);
    EXPECT_EQ(e.m, 0);
  }
}

TEST(Poles, ShiftedTowersOnlyWithGamma) {
  const Region r{-3.0, 2.0, 0.0, 0.0};
  const auto p0 = predicted_poles(presets::gasket(), r, 0.0);
  const auto p1 = predicted_poles(presets::gasket(), r, 0.5);
  EXPECT_EQ(p0.size(), 1u);
  ASSERT_EQ(p1.size(), 3u);
  EXPECT_NEAR(p1[1].position.real(), 1.3652123889719707 - 2.0, 1e-12);
  EXPECT_NEAR(p1[2].position.real(), 1.3652123889719707 - 4.0, 1e-12);
}

TEST(Poles, ExpboundsListsEveryTower) {
  const Region r{-1.0, 2.0, -0.5, 0.5};
  EXPECT_EQ(predicted_poles(presets::interval(), r, 0.0, ContinuationMode::lemma).size(), 1u);
  EXPECT_EQ(predicted_poles(presets::interval(), r, 0.0, ContinuationMode::expbounds).size(), 2u);
}

TEST(Poles, ResidueFromFit) {
  const auto& e = interval_zeta().engine();
  const auto r0 = residue_from_oscillation(e.profiles()[0], e.model(), 0);
  EXPECT_NEAR(std::abs(*r0.residue - 1.0 / std::numbers::pi), 0.0, 1e-10);
  const auto r1 = residue_from_oscillation(e.profiles()[0], e.model(), 1);
  EXPECT_TRUE(r1.residue_vanishes);
}

TEST(Poles, LocatesIntervalPole) {
  const auto p = locate_poles(interval_zeta().engine(), {0.5, 1.5, -2.0, 2.0}, 0.0);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(std::abs(p[0].position - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(*p[0].residue - 1.0 / std::numbers::pi), 0.0, 1e-8);
  EXPECT_EQ(p[0].source, PoleSource::located);
  EXPECT_LT(p[0].match_distance, 1e-8);
}

TEST(Poles, LocatesGasketLattice) {
  const auto p = locate_poles(gasket_zeta().engine(), {0.5, 2.0, -9.0, 9.0}, 0.0);
  ASSERT_EQ(p.size(), 3u);
  for (const auto& e : p) {
    EXPECT_NEAR(std::abs(e.position - cplx(1.3652123889719707, 7.8079250633246856 * e.n)), 0.0, 1e-6);
  }
  // Residue of the leading pole: 2 g_0 / Γ(d_S/2).
  const double g0 = gasket_zeta().engine().profiles()[0].g(0).real();
  EXPECT_NEAR(std::abs(*p[1].residue), 2.0 * g0 / std::tgamma(1.3652123889719707 / 2.0), 1e-6);
}

TEST(Poles, ExpboundsFindsShiftedPoles) {
  const auto z = interval_expbounds();
  const auto p = locate_poles(z.engine(), {-2.5, 1.5, -0.5, 0.5}, 0.5);
  // s = 1 and the γ-shifted s = -1; the k = 1 tower at s = 0 is cancelled by 1/Γ.
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0].position.real(), -1.0, 1e-6);
  EXPECT_NEAR(p[1].position.real(), 1.0, 1e-6);
}

TEST(Poles, RefusesRegionOutsideDomain) {
  EXPECT_THROW(locate_poles(interval_zeta().engine(), {-1.0, 1.5, -1.0, 1.0}, 0.0), DomainError);
}

// ---------------------------------------------------------------- functional

TEST(Functional, SingleEigenvalueDistinguishesForms) {
  const auto r = functional_eq_residual(make_batch({{1.0, 1}}), 3.0, 0.5);
  EXPECT_NEAR(r.direct_form, 0.0, 1e-10);
  EXPECT_NEAR(r.paper_form, std::pow(1.5, -2.5), 1e-10);
}

TEST(Functional, DirectFormHoldsOnContinuation) {
  for (const SpectralZeta* z : {&interval_zeta(), &toy_zeta()}) {
    for (cplx s : {cplx(0.6, 2.0), cplx(3.0, 0.0)}) {
      const auto r = functional_eq_residual(*z, s, 0.5);
      EXPECT_LT(r.direct_form, 1e-8);
      EXPECT_GT(r.paper_form, 1e-4);
    }
  }
}

TEST(Functional, RichardsonGuard) {
  EXPECT_THROW(functional_eq_residual(make_batch({{1.0, 1}}), 3.0, 0.5, 0.4, 1e-12), DomainError);
}
