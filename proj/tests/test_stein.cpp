#include <gtest/gtest.h>

#include <cmath>

#include "freeevt/error.hpp"
#include "freeevt/families.hpp"
#include "freeevt/stein.hpp"

using namespace freeevt;

namespace {

Differentiable constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

DensityProfile flat_profile() {
  DensityProfile p;
  p.u = [](double t) { return t > 0 && t < 1 ? 1.0 : 0.0; };
  p.rho = [](double) { return 0.0; };
  p.A = 0.0;
  p.B = 1.0;
  p.edge_density = 1.0;
  return p;
}

}  // namespace

TEST(SteinSolution, Values) {
  EXPECT_NEAR(SteinSolution(0.0, 1.0)(2.0), 0.6321205588285576784, 1e-15);
  EXPECT_NEAR(SteinSolution(0.0, 1.0)(0.0), 0.0, 1e-16);
  EXPECT_NEAR(SteinSolution(1.0, 2.0)(1.0), 0.0, 1e-16);
  EXPECT_NEAR(SteinSolution(-1.0, -2.0)(-3.0), 1.0 / 3.0, 1e-15);
}

TEST(SteinSolution, OutsideHalfLine) {
  try {
    SteinSolution(1.0, 2.0)(-1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
  EXPECT_THROW(SteinSolution(-1.0, -2.0)(0.5), Error);
  EXPECT_NO_THROW(SteinSolution(0.0, 1.0)(-50.0));
}

TEST(SteinSolution, SolvesTheEquation) {
  for (double g : {0.0, 0.5, 2.0, -0.5, -2.0}) {
    for (double x : {-2.0, -0.5, 0.5, 1.5, 4.0}) {
      const SteinSolution phi(g, x);
      const Differentiable d = phi.as_differentiable();
      for (double w : {-3.0, -1.2, -0.4, 0.3, 0.9, 2.5, 6.0}) {
        if (!phi.in_domain(w) || w == x) continue;
        const double target = (w <= x ? 1.0 : 0.0) - free_extreme_value_cdf(g, x);
        EXPECT_NEAR(apply_stein_operator(g, d, w), target, 1e-14) << g << " " << x << " " << w;
        EXPECT_LE(std::abs(phi(w)), 1.0 + 1e-15);
      }
    }
  }
}

TEST(SteinOperator, Examples) {
  const Differentiable e{[](double w) { return std::exp(w); }, [](double w) { return std::exp(w); }};
  EXPECT_NEAR(apply_stein_operator(0.0, e, 0.0), 0.0, 1e-15);
  const Differentiable sq{[](double w) { return w * w; }, [](double w) { return 2 * w; }};
  EXPECT_NEAR(apply_stein_operator(2.0, sq, 3.0), 0.0, 1e-14);
  EXPECT_NEAR(apply_stein_operator(0.0, SteinSolution(0.0, 1.0).as_differentiable(), 0.5),
              0.3678794411714423216, 1e-15);
  // Without a derivative the operator differentiates numerically.
  const Differentiable e_numeric{[](double w) { return std::exp(w); }, nullptr};
  EXPECT_NEAR(apply_stein_operator(0.0, e_numeric, 0.3), 0.0, 1e-10);
}

TEST(DensityOperator, Examples) {
  EXPECT_NEAR(apply_density_operator(0.0, gumbel_family(2).profile, constant(1.0), 0.0), -0.5, 1e-15);
  EXPECT_NEAR(apply_density_operator(1.0, frechet_family(1.0, 2).profile, constant(1.0), 1.0), -0.5,
              1e-15);
  EXPECT_EQ(apply_density_operator(-1.0, weibull_family(-1.0, 3).profile, constant(0.0), -0.5), 0.0);
  try {
    apply_density_operator(0.0, gumbel_family(2).profile, constant(1.0), -5.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
}

TEST(GammaFunctional, Examples) {
  EXPECT_NEAR(gamma_functional(0.0, gumbel_family(10).profile, 0.0), 0.1, 1e-15);
  EXPECT_NEAR(gamma_functional(1.0, frechet_family(1.0, 5).profile, 1.0), 0.2, 1e-15);
  EXPECT_NEAR(gamma_functional(-1.0, weibull_family(-1.0, 4).profile, -1.0), 0.25, 1e-15);
}

TEST(RemainderTerm, Examples) {
  EXPECT_EQ(remainder_term(0.0, 0.0), 0.0);
  EXPECT_NEAR(remainder_term(0.0, -0.5), 0.3934693402873665764, 1e-15);
  EXPECT_NEAR(remainder_term(2.0, 0.5), 0.1875, 1e-15);
  EXPECT_NEAR(remainder_term(-1.0, -2.0), 1.0, 1e-15);
  for (auto [g, A] : {std::pair{1.0, -0.5}, std::pair{-1.0, 0.5}}) {
    try {
      remainder_term(g, A);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DomainError);
    }
  }
}

TEST(EtaBound, Examples) {
  EXPECT_NEAR(eta_boundary_bound(0.0, gumbel_family(2).profile), 0.19314718055994530942, 1e-15);
  EXPECT_NEAR(eta_boundary_bound(1.0, frechet_family(1.0, 2).profile), 0.19314718055994530942, 1e-15);
  DensityProfile p = gumbel_family(2).profile;
  p.edge_density = 0.0;
  EXPECT_EQ(eta_boundary_bound(0.0, p), 0.0);
}

TEST(EtaNumeric, Examples) {
  EXPECT_NEAR(eta_boundary_numeric(0.0, gumbel_family(2).profile, 1.0), -0.071054876848232348464,
              1e-10);
  EXPECT_NEAR(eta_boundary_numeric(1.0, frechet_family(1.0, 2).profile, 2.0),
              -0.096573590279972654709, 1e-10);
}

TEST(Identity, IntegrationByParts) {
  for (double g : {0.0, 0.5, -2.0}) {
    const auto fam = worked_family(g, 5);
    for (double p : {0.1, 0.5, 0.9}) {
      const double x = quantile(fam.cdf, p);
      const double lhs = density_operator_expectation(g, fam.profile, x);
      const double rhs = boundary_identity_rhs(g, eta_boundary_numeric(g, fam.profile, x));
      EXPECT_NEAR(lhs, rhs, 1e-9) << g << " " << x;
    }
  }
}

TEST(Validation, WorkedFamiliesPass) {
  for (auto fam : {gumbel_family(2), weibull_family(-2.0, 3), frechet_family(0.5, 7)}) {
    const auto rep = validate_density_profile(fam.gamma, fam.profile);
    EXPECT_TRUE(rep.ok()) << (rep.first_failure() ? rep.first_failure()->name : "");
    EXPECT_EQ(rep.checks.size(), 4u);
  }
}

TEST(Validation, ConditionTags) {
  auto names = [](double g, const DensityProfile& p) {
    std::vector<std::string> out;
    for (const auto& c : validate_density_profile(g, p).checks) out.push_back(c.name);
    return out;
  };
  EXPECT_EQ(names(0.0, gumbel_family(3).profile),
            (std::vector<std::string>{"G-Cond1", "G-Cond1-1", "G-Cond2", "G-Cond3"}));
  EXPECT_EQ(names(1.0, frechet_family(1.0, 3).profile),
            (std::vector<std::string>{"F-Cond1", "F-Cond1-1", "F-Cond2", "F-Cond4"}));
  EXPECT_EQ(names(-1.0, weibull_family(-1.0, 3).profile).back(), "W-Cond4");
}

TEST(Validation, NonvanishingAtUpperEdge) {
  const auto rep = validate_density_profile(0.0, flat_profile());
  ASSERT_NE(rep.first_failure(), nullptr);
  EXPECT_EQ(rep.first_failure()->name, "G-Cond1-1");
  try {
    stein_bound(0.0, flat_profile());
    FAIL();
  } catch (const HypothesisViolation& e) {
    EXPECT_EQ(e.condition(), "G-Cond1-1");
    EXPECT_EQ(e.kind(), ErrorKind::HypothesesViolated);
  }
}

TEST(Validation, WrongRhoFailsCond2) {
  DensityProfile p = gumbel_family(2).profile;
  p.rho = [](double t) { return -1.0 + 0.3 * std::exp(-t); };
  const auto rep = validate_density_profile(0.0, p);
  const auto* f = rep.first_failure();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->name, "G-Cond2");
}

TEST(Validation, WrongEdgeDensityFailsCond11) {
  DensityProfile p = frechet_family(1.0, 2).profile;
  p.edge_density *= 1.01;
  const auto rep = validate_density_profile(1.0, p);
  const auto* f = rep.first_failure();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->name, "F-Cond1-1");
}

TEST(Validation, UnboundedTRho) {
  // u(t) = e^{1-t} on (1, inf): t u(t) -> 0, but t rho(t) = -t is unbounded.
  DensityProfile p;
  p.A = 1.0;
  p.u = [](double t) { return t > 1 ? std::exp(1.0 - t) : 0.0; };
  p.rho = [](double) { return -1.0; };
  p.edge_density = 1.0;
  const auto rep = validate_density_profile(1.0, p);
  ASSERT_NE(rep.first_failure(), nullptr);
  EXPECT_EQ(rep.first_failure()->name, "F-Cond4");
}

TEST(Validation, FrechetNeedsPositiveEdge) {
  DensityProfile p = gumbel_family(2).profile;  // A < 0
  const auto rep = validate_density_profile(1.0, p);
  const auto* f = rep.first_failure();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->name, "F-Cond1");
}

TEST(SteinBound, Examples) {
  auto r = stein_bound(0.0, gumbel_family(10).profile);
  EXPECT_NEAR(r.total, 0.1, 1e-8);
  EXPECT_NEAR(r.integral_term, 0.051755359079563288952, 1e-9);
  EXPECT_EQ(r.n, 10);
  EXPECT_DOUBLE_EQ(r.reference_rate, 0.1);
  EXPECT_FALSE(r.measured_dk.has_value());

  r = stein_bound(2.0, frechet_family(2.0, 100).profile);
  EXPECT_NEAR(r.total, 0.01, 1e-8);
  EXPECT_NEAR(r.integral_term, 0.0050167505033573228287, 1e-9);

  r = stein_bound(-1.0, weibull_family(-1.0, 2).profile);
  EXPECT_NEAR(r.total, 0.5, 1e-8);
  EXPECT_NEAR(r.integral_term, 0.30685281944005469058, 1e-9);

  r = stein_bound(0.5, frechet_family(0.5, 5).profile);
  EXPECT_NEAR(r.total, 0.2, 1e-8);
  EXPECT_NEAR(r.integral_term, 0.10742579474316097693, 1e-9);
}

TEST(DecompositionBound, ConstantFactorHasNoSupTerm) {
  // u = e^{-x} on (0, inf): C = 1, A = 0 kills the boundary summand.
  DensityProfile p;
  p.u = [](double x) { return x > 0 ? std::exp(-x) : 0.0; };
  p.rho = [](double) { return -1.0; };
  p.A = 0.0;
  p.edge_density = 1.0;
  EXPECT_NEAR(profile_decomposition_bound(0.0, constant(1.0), p), 0.0, 1e-15);
}

TEST(DecompositionBound, MismatchIsReported) {
  const auto fam = gumbel_family(5);
  try {
    profile_decomposition_bound(0.0, constant(1.0), fam.profile);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProfileMismatch);
  }
}

TEST(DecompositionBound, DominatesStein) {
  for (double g : {0.0, 1.0, -1.0}) {
    const auto fam = worked_family(g, 20);
    EXPECT_GE(profile_decomposition_bound(g, *fam.factor, fam.profile),
              stein_bound(g, fam.profile).total);
  }
}
