#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fraczeta/decimation.hpp"
#include "fraczeta/graph.hpp"
#include "fraczeta/model.hpp"
#include "fraczeta/oracle/riemann.hpp"
#include "fraczeta/partition.hpp"
#include "fraczeta/quadrature.hpp"
#include "fraczeta/special.hpp"
#include "fraczeta/spectrum.hpp"

using namespace fraczeta;

namespace {

// Reference values below were computed with mpmath at 30 digits.

void expect_close(cplx got, cplx want, double rel) {
  EXPECT_LE(std::abs(got - want), rel * std::abs(want)) << got << " vs " << want;
}

}  // namespace

TEST(Special, GammaMatchesReference) {
  expect_close(gamma(cplx(0.5)), std::sqrt(std::numbers::pi), 1e-13);
  expect_close(gamma({3.7, 2.1}), {-1.8598252959665196, 1.1623401526968618}, 1e-13);
  expect_close(gamma({-2.5, 0.3}), {-0.61382299743774149, -0.21123261493704178}, 1e-13);
  expect_close(gamma({0.2, -4.0}), {0.0014751198542645232, -0.0027150029215016553}, 1e-12);
}

TEST(Special, GammaRecurrenceAndReflection) {
  for (cplx z : {cplx(0.3, 1.7), cplx(2.2, -0.4), cplx(-1.3, 2.5)}) {
    expect_close(gamma(z + 1.0), z * gamma(z), 1e-13);
    expect_close(gamma(z) * gamma(1.0 - z), std::numbers::pi / std::sin(std::numbers::pi * z), 1e-12);
    expect_close(rgamma(z) * gamma(z), 1.0, 1e-13);
  }
}

TEST(Special, ReciprocalGammaVanishesAtPoles) {
  for (int m = 0; m <= 5; ++m) EXPECT_EQ(rgamma(cplx(-m, 0.0)), cplx(0.0, 0.0));
}

TEST(Special, DigammaAtIntegers) {
  EXPECT_NEAR(digamma_int_shift(0), -0.57721566490153286, 1e-15);
  EXPECT_NEAR(digamma_int_shift(3), -0.57721566490153286 + 1.0 + 0.5 + 1.0 / 3.0, 1e-15);
}

TEST(Special, UpperIncompleteGamma) {
  EXPECT_NEAR(upper_incomplete_gamma(2.5, 3.0), 0.407069175871303, 1e-14);
  EXPECT_NEAR(upper_incomplete_gamma(0.5, 10.0) / 1.3726266235449858e-5, 1.0, 1e-12);
  EXPECT_NEAR(upper_incomplete_gamma(1.5, 0.0), std::tgamma(1.5), 1e-15);
  EXPECT_EQ(upper_incomplete_gamma(1.0, 1e5), 0.0);
}

TEST(Quadrature, IntegratesSmoothFunctions) {
  const auto rule = composite_gauss_legendre(0.0, 3.0, 4);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * std::exp(-rule.nodes[i]);
  EXPECT_NEAR(acc, 1.0 - std::exp(-3.0), 1e-15);
  EXPECT_EQ(panels_for(0.0, 1.0, 0.3), 4u);
}

TEST(Oracle, RiemannZeta) {
  expect_close(oracle::riemann_zeta({0.5, 14.0}), {0.022241142609993589, -0.10325812326645006}, 1e-12);
  // Left of the critical strip the head sum cancels; absolute error ~1e-16 N^{1 - Re s}.
  EXPECT_LE(std::abs(oracle::riemann_zeta({-3.5, 2.0}) - cplx(-0.0035609799649190723, 0.042622537314776407)), 1e-9);
  expect_close(oracle::riemann_zeta(2.3), 1.4324177993153238, 1e-14);
  expect_close(oracle::riemann_zeta(0.0), -0.5, 1e-14);
  expect_close(oracle::interval_zeta(0.5), -0.82391680215736897, 1e-13);
}

TEST(Oracle, IntervalHeatTrace) {
  EXPECT_NEAR(oracle::interval_heat_trace(0.01), 2.3209479177387814, 1e-13);
  EXPECT_NEAR(oracle::interval_heat_trace(1e-4), 27.709479177387814, 1e-11);
  EXPECT_NEAR(oracle::interval_heat_trace(1.0) / 5.1723186203819463e-5, 1.0, 1e-12);
}

TEST(Model, PresetDimensions) {
  const auto i = presets::interval();
  EXPECT_EQ(i.N, 2);
  EXPECT_DOUBLE_EQ(i.tau, 4.0);
  EXPECT_DOUBLE_EQ(i.d_S, 1.0);

  const auto g = presets::gasket();
  EXPECT_DOUBLE_EQ(g.tau, 5.0);
  EXPECT_NEAR(g.d_S, 1.3652123889719707, 1e-14);
  EXPECT_NEAR(g.d_S, 2.0 * g.d_f / g.d_w, 1e-14);
  EXPECT_NEAR(g.lattice_spacing(), 7.8079250633246856, 1e-13);
  // Commonly quoted as 7.808556; the difference is below 1e-3.
  EXPECT_LT(std::abs(g.lattice_spacing() - 7.808556), 1e-3);
}

TEST(Model, CarpetUsesEstimatedScaling) {
  const auto c = presets::carpet();
  EXPECT_NEAR(c.tau, 8.0 * 1.251, 1e-12);
  EXPECT_EQ(c.tower_dims().size(), 3u);
  EXPECT_FALSE(c.rho_F_exact.has_value());
}

TEST(Model, RejectsViolatedInvariants) {
  EXPECT_THROW(make_model("bad", 3, Rational{1, 4}, 2.0, 0.0), ConfigError);   // tau <= 1
  EXPECT_THROW(make_model("bad", 1, Rational{5, 1}, 2.0, 0.0), ConfigError);   // N < 2
  EXPECT_THROW(make_model("bad", 3, Rational{5, 3}, 2.0, 5.0), ConfigError);   // d_boundary >= d_f
  EXPECT_THROW(make_model("bad", 3, Rational{5, 3}, 2.0, 0.0, {0.5, 0.0}), ConfigError);  // d_k[0] != d_f
}

TEST(Spectrum, IntervalBatch) {
  const auto b = interval_spectrum(100);
  ASSERT_EQ(b.pairs.size(), 100u);
  EXPECT_NEAR(b.pairs.front().value, std::numbers::pi * std::numbers::pi, 1e-12);
  EXPECT_FALSE(b.is_finite());
  EXPECT_FALSE(b.has_zero_mode());
  EXPECT_EQ(b.count_le(10.0 * 10.0 * std::numbers::pi * std::numbers::pi), 10);
}

TEST(Spectrum, ToyBatchIsGeometric) {
  const auto b = toy_geometric_spectrum(presets::toy(3, 5), 6);
  ASSERT_EQ(b.pairs.size(), 7u);  // levels 0..K
  for (std::size_t k = 0; k < 7; ++k) {
    EXPECT_DOUBLE_EQ(b.pairs[k].value, std::pow(5.0, k));
    EXPECT_EQ(b.pairs[k].multiplicity, static_cast<std::int64_t>(std::pow(3.0, k)));
  }
}

TEST(Spectrum, RejectsUnsortedPairs) {
  EXPECT_THROW(make_batch({{2.0, 1}, {1.0, 1}}), Error);
}

TEST(Graph, LevelOneGasket) {
  const auto b = dense_graph_spectrum(1, presets::gasket());
  ASSERT_EQ(b.pairs.size(), 2u);
  EXPECT_NEAR(b.pairs[0].value, 2.0, 1e-12);
  EXPECT_EQ(b.pairs[0].multiplicity, 1);
  EXPECT_NEAR(b.pairs[1].value, 5.0, 1e-12);
  EXPECT_EQ(b.pairs[1].multiplicity, 2);
}

TEST(Decimation, MatchesDenseEigensolve) {
  const auto model = presets::gasket();
  for (int level = 1; level <= 4; ++level) {
    const auto dec = decimation_graph_spectrum(level, gasket_decimation(), model).batch;
    const auto dense = dense_graph_spectrum(level, model);
    ASSERT_EQ(dec.pairs.size(), dense.pairs.size()) << "level " << level;
    EXPECT_EQ(dec.total_multiplicity(), dense.total_multiplicity());
    for (std::size_t i = 0; i < dec.pairs.size(); ++i) {
      EXPECT_NEAR(dec.pairs[i].value, dense.pairs[i].value, 1e-9);
      EXPECT_EQ(dec.pairs[i].multiplicity, dense.pairs[i].multiplicity);
    }
  }
}

TEST(Decimation, InteriorVertexCount) {
  // Level-m gasket graph has (3^{m+1} - 3)/2 interior vertices.
  for (int level = 1; level <= 6; ++level) {
    const auto dec = decimation_graph_spectrum(level, gasket_decimation(), presets::gasket()).batch;
    EXPECT_EQ(dec.total_multiplicity(), (static_cast<std::int64_t>(std::pow(3, level + 1)) - 3) / 2);
  }
}

TEST(Decimation, RejectsNonIntegralBirthRule) {
  auto cfg = gasket_decimation();
  cfg.births[0].div = 4;
  EXPECT_THROW(decimation_graph_spectrum(3, cfg, presets::gasket()), ConfigError);
}

TEST(Decimation, LimitSpectrumIsCertified) {
  const auto r = fractal_spectrum_complete(7, gasket_decimation(), presets::gasket());
  EXPECT_GT(r.certified_cutoff, 0.0);
  EXPECT_LE(r.batch.pairs.back().value, r.certified_cutoff * (1.0 + 1e-12));
  // Lowest Dirichlet eigenvalue of the gasket Laplacian, 5^m-renormalized.
  EXPECT_NEAR(r.batch.lambda_min, 11.2105, 1e-3);
}

TEST(Partition, MatchesThetaOracle) {
  const auto b = interval_spectrum(10000);
  for (double t : {1e-4, 1e-3, 0.01, 0.1, 1.0}) {
    const auto z = partition_value(b, t);
    EXPECT_TRUE(z.accepted);
    EXPECT_NEAR(z.value, oracle::interval_heat_trace(t), 1e-12 * std::max(1.0, z.value));
  }
}

TEST(Partition, WeylRatioIncludesBoundaryTerm) {
  // W(1e-4) = 1/(2 sqrt(pi)) - sqrt(1e-4)/2 to within e^{-1/t}.
  const auto b = interval_spectrum(10000);
  EXPECT_NEAR(weyl_ratio(b, 1e-4), 0.27709479177387814, 1e-12);
}

TEST(Partition, TruncationFlag) {
  const auto b = interval_spectrum(10);
  EXPECT_FALSE(partition_value(b, 1e-4).accepted);
  EXPECT_TRUE(partition_value(b, 0.1).accepted);
}

TEST(Partition, TraceGridDecreases) {
  const auto b = interval_spectrum(1000);
  const auto g = trace_grid(b, 1e-3, 1.0, 50);
  ASSERT_EQ(g.size(), 50u);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i].value, g[i - 1].value);
  EXPECT_THROW(trace_grid(b, 1.0, 0.1, 10), Error);
}

TEST(Partition, TailCertificate) {
  const auto b = interval_spectrum(10000);
  const auto c = tail_certificate(b, 20.0);
  EXPECT_TRUE(c.verified);
  EXPECT_DOUBLE_EQ(c.c4, b.lambda_min);
  EXPECT_GE(c.c3, 1.0);
  EXPECT_LE(c.c3, 1.1);
  for (double t : {1.0, 2.5, 7.0, 20.0}) {
    EXPECT_LE(partition_value(b, t).value, c.c3 * std::exp(-c.c4 * t) * (1.0 + 1e-12));
  }
  EXPECT_THROW(tail_certificate(make_batch({{0.0, 1}, {1.0, 1}}), 20.0), Error);
}
