#include <gtest/gtest.h>

#include <cmath>

#include "freeevt/error.hpp"
#include "freeevt/families.hpp"
#include "freeevt/metrics.hpp"

using namespace freeevt;

TEST(Gumbel, EdgeAndCdf) {
  const auto fam = gumbel_family(2);
  EXPECT_NEAR(fam.profile.A, -0.3266342599782809824, 1e-15);
  EXPECT_NEAR(fam.cdf(0.0), 0.21306131942526684721, 1e-15);
  EXPECT_EQ(fam.cdf(fam.profile.A - 1e-9), 0.0);
  EXPECT_NEAR(fam.profile.edge_density, 0.69314718055994530942, 1e-15);
  EXPECT_TRUE(std::isinf(fam.profile.B));
  EXPECT_TRUE(fam.profile.closed_form_edges);
  EXPECT_NEAR(fam.profile.rho(0.0), -0.5, 1e-15);
}

TEST(Gumbel, EdgeLimitMatchesNumerics) {
  const auto fam = gumbel_family(2);
  EXPECT_NEAR(numerics::one_sided_limit(fam.profile.u, fam.profile.A, numerics::Side::FromAbove),
              0.69314718055994530942, 1e-10);
  EXPECT_NEAR(numerics::differentiate([&](double t) { return std::log(fam.profile.u(t)); }, 0.0, 0.5),
              -0.5, 1e-8);
}

TEST(Gumbel, EdgeApproachesZero) {
  EXPECT_LT(std::abs(gumbel_family(1000000).profile.A), 1e-5);
  EXPECT_NEAR(gumbel_family(1000000).profile.A, -5.0000020833345833342e-7, 1e-15);
}

TEST(Gumbel, DensityNormalized) {
  const auto fam = gumbel_family(2);
  EXPECT_NEAR(numerics::integrate(fam.profile.u, {fam.profile.A, kInf}), 1.0, 1e-12);
}

TEST(Families, RequireTwoCopies) {
  EXPECT_THROW(gumbel_family(1), Error);
  EXPECT_THROW(frechet_family(1.0, 0), Error);
  EXPECT_THROW(frechet_family(-1.0, 3), Error);
  EXPECT_THROW(weibull_family(1.0, 3), Error);
}

TEST(Frechet, Edges) {
  EXPECT_NEAR(frechet_family(1.0, 2).profile.A, 0.72134752044448170368, 1e-15);
  EXPECT_NEAR(frechet_family(2.0, 2).profile.A, 0.84932180028801904272, 1e-15);
  const auto fam = frechet_family(1.0, 2);
  EXPECT_NEAR(fam.profile.edge_density, 0.96090602783640284933, 1e-14);
  // lim t u_n(t) = -gamma (n-1) log(1 - 1/n) = ln 2 here.
  auto tu = [&](double t) { return t * fam.profile.u(t); };
  EXPECT_NEAR(numerics::one_sided_limit(tu, fam.profile.A, numerics::Side::FromAbove),
              0.69314718055994530942, 1e-10);
}

TEST(Weibull, Edges) {
  EXPECT_NEAR(weibull_family(-1.0, 2).profile.A, -1.3862943611198906188, 1e-15);
  EXPECT_NEAR(weibull_family(-2.0, 2).profile.A, -1.177410022515474691, 1e-15);
  const auto fam = weibull_family(-1.0, 2);
  EXPECT_EQ(fam.profile.B, 0.0);
  auto tu = [&](double t) { return std::abs(t) * fam.profile.u(t); };
  EXPECT_NEAR(numerics::one_sided_limit(tu, fam.profile.A, numerics::Side::FromAbove),
              0.69314718055994530942, 1e-10);
  EXPECT_EQ(fam.cdf(0.0), 1.0);
  EXPECT_EQ(fam.cdf(0.3), 1.0);
}

TEST(Families, DensitiesIntegrateToOne) {
  for (double g : {0.0, 0.5, 1.0, 2.0, -0.5, -1.0, -2.0}) {
    for (int n : {2, 10, 1000}) {
      const auto fam = worked_family(g, n);
      EXPECT_NEAR(numerics::integrate(fam.profile.u, {fam.profile.A, fam.profile.B}), 1.0, 1e-9)
          << g << " " << n;
    }
  }
}

TEST(Families, QuantileInvertsCdf) {
  for (double g : {0.0, 2.0, -0.5}) {
    const auto fam = worked_family(g, 7);
    for (double p : {0.01, 0.5, 0.99}) EXPECT_NEAR(fam.cdf(fam.cdf.quantile(p)), p, 1e-13);
    EXPECT_NEAR(fam.cdf.quantile(1e-300), fam.profile.A, 1e-12 * (1 + std::abs(fam.profile.A)));
  }
}

TEST(Families, FactorReproducesDensity) {
  for (double g : {0.0, 1.0, -2.0}) {
    const auto fam = worked_family(g, 4);
    ASSERT_TRUE(fam.factor.has_value());
    const double x = quantile(fam.cdf, 0.5);
    const double w = g == 0.0 ? std::exp(-x) : std::pow(std::abs(x), -g - 1);
    EXPECT_NEAR((*fam.factor)(x) * w, fam.profile.u(x), 1e-15);
    const double h = 1e-6;
    EXPECT_NEAR(fam.factor->derivative(x),
                ((*fam.factor)(x + h) - (*fam.factor)(x - h)) / (2 * h), 1e-8);
  }
}

TEST(Generic, ClassicalInputMatchesClosedForm) {
  for (double g : {0.0, 1.0, -1.0}) {
    const ExtremeValueLaw law{Calculus::Classical, regime_of(g), g};
    for (int n : {2, 10}) {
      const auto gen = generic_family(make_law(law), g, norming_constants(law, n));
      const auto ref = worked_family(g, n);
      EXPECT_NEAR(gen.profile.A, ref.profile.A, 1e-12);
      EXPECT_NEAR(gen.profile.edge_density, ref.profile.edge_density, 1e-8);
      EXPECT_FALSE(gen.rho_numeric);
      EXPECT_FALSE(gen.profile.closed_form_edges);
      const double x = quantile(ref.cdf, 0.4);
      EXPECT_NEAR(gen.profile.u(x), ref.profile.u(x), 1e-13);
      EXPECT_NEAR(gen.profile.rho(x), ref.profile.rho(x), 1e-12);
      EXPECT_NEAR(stein_bound(g, gen.profile).total, 1.0 / n, 1e-8);
    }
  }
}

TEST(Generic, UniformHalfScale) {
  // U uniform on [0, 1], n = 2, (a, b) = (1/2, 0): W = max{x - 1, 0} on [1, 2].
  const auto fam = generic_family(uniform(), -1.0, {0.5, 0.0, 2});
  EXPECT_NEAR(fam.profile.A, 1.0, 1e-14);
  EXPECT_NEAR(fam.profile.B, 2.0, 1e-14);
  EXPECT_NEAR(fam.profile.edge_density, 1.0, 1e-12);
  EXPECT_NEAR(fam.cdf(1.5), 0.5, 1e-15);
}

TEST(Generic, UniformIsExactlyFreeWeibull) {
  // (a, b) = (1/n, 1) turns the free power of the uniform law into Psi_{-1}.
  for (int n : {2, 5}) {
    const auto fam = generic_family(uniform(), -1.0, {1.0 / n, 1.0, n});
    EXPECT_NEAR(fam.profile.A, -1.0, 1e-14);
    EXPECT_NEAR(fam.profile.B, 0.0, 1e-15);
    const auto rep = stein_bound(-1.0, fam.profile);
    EXPECT_NEAR(rep.total, 0.0, 1e-12);
    EXPECT_NEAR(kolmogorov_distance(fam.cdf, free_law(-1.0)), 0.0, 1e-14);
  }
}

TEST(Generic, NumericRhoIsFlagged) {
  Cdf U = classical_law(0.0);
  U.log_density_derivative = nullptr;
  const auto fam = generic_family(U, 0.0, {1.0, std::log(4.0), 4});
  EXPECT_TRUE(fam.rho_numeric);
  const auto ref = gumbel_family(4);
  EXPECT_NEAR(fam.profile.rho(1.0), ref.profile.rho(1.0), 1e-7);
}

TEST(Generic, AtomHasNoDensity) {
  try {
    generic_family(point_mass(0.0), 0.0, {1.0, 0.0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::NoDensity || e.kind() == ErrorKind::DegeneratePower);
  }
}

TEST(Generic, CutLevel) {
  EXPECT_NEAR(cut_level(2), 1.3862943611198906188, 1e-15);
  EXPECT_GT(cut_level(1000), 1.0);
}
