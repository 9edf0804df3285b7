#pragma once

// Stein machinery for the free extreme value laws Psi_gamma.
//
// For each x the bounded solution phi_x of  J_gamma phi = 1_(-inf,x] - Psi_gamma(x)
// is available in closed form, where
//   J_0     phi(w) = phi'(w) - phi(w)                   (w real)
//   J_gamma phi(w) =  gamma^-1 w phi'(w) - phi(w)       (gamma > 0, w > 0)
//   J_gamma phi(w) = -gamma^-1 w phi'(w) + phi(w)       (gamma < 0, w < 0)
// Pairing with the density-adapted operator J_{gamma,n} of a renormalized
// maximum W_n gives the Kolmogorov bound
//   d_K(F_{W_n}, Psi_gamma) <= int_A^B |Gamma(t)| u_n(t) dt + r_A u_n(A+).

#include <optional>
#include <string>
#include <vector>

#include "freeevt/numerics.hpp"

namespace freeevt {

// A function together with (optionally) its closed-form derivative.
struct Differentiable {
  RealFn value;
  RealFn derivative;  // empty: fall back to numerics::differentiate

  double operator()(double w) const { return value(w); }
  double slope(double w, double scale) const;
};

/// Density u_n of the renormalized maximum W_n on (A, B), together with its
/// log-derivative rho_n = (log u_n)' and the right limit u_n(A+).
struct DensityProfile {
  RealFn u;
  RealFn rho;
  double A = 0.0;
  double B = kInf;
  double edge_density = 0.0;
  int n = 2;
  // True when A and u(A+) come from exact formulas rather than numerics.
  bool closed_form_edges = false;
};

class SteinSolution {
 public:
  SteinSolution(double gamma, double x);

  double gamma() const { return gamma_; }
  double x() const { return x_; }

  bool in_domain(double w) const;
  // Throws a domain error for w outside (0, inf) when gamma > 0 and outside
  // (-inf, 0) when gamma < 0.
  double operator()(double w) const;
  // Closed-form derivative; at the kink w == x the left branch is used.
  double derivative(double w) const;

  Differentiable as_differentiable() const;

 private:
  double gamma_;
  double x_;
  double psi_x_;  // Psi_gamma(x)
};

double stein_solution_eval(const SteinSolution& sol, double w);

/// Psi_gamma(x) without building a Cdf.
double free_extreme_value_cdf(double gamma, double x);

double apply_stein_operator(double gamma, const Differentiable& phi, double w);

// Requires w in (profile.A, profile.B).
double apply_density_operator(double gamma, const DensityProfile& profile,
                              const Differentiable& phi, double w);

// 1 + rho(x) for gamma == 0, 1 + gamma^-1 (1 + x rho(x)) otherwise.
double gamma_functional(double gamma, const DensityProfile& profile, double x);

// r_A: 1 - e^{-|A|} for gamma == 0,
// gamma^-1 A {1 - (|A| ^ |A|^-1)^|gamma|} otherwise (needs sign(A) == sign(gamma)).
double remainder_term(double gamma, double A);

/// Uniform-in-x bound on |eta_{gamma,A,x}|:
///   (1 - e^{-|A|}) u(A+)                            gamma == 0
///   A {1 - (A ^ A^-1)^gamma} u(A+)                  gamma > 0
///   |A| {1 - (|A| ^ |A|^-1)^-gamma} u(A+)           gamma < 0
double eta_boundary_bound(double gamma, const DensityProfile& profile);

// eta = lim_{t -> A+} phi_x(t) u(t)   (gamma == 0)
//     = lim_{t -> A+} t phi_x(t) u(t) (gamma != 0), via one_sided_limit.
double eta_boundary_numeric(double gamma, const DensityProfile& profile, double x);

// Left side of the integration-by-parts identity: the u-weighted integral of
// J_{gamma,n} phi_x over (A, B), with x registered as a breakpoint.
double density_operator_expectation(double gamma, const DensityProfile& profile, double x,
                                    const numerics::Tolerance& tol = {});

// Right side of that identity given eta: -eta, -eta/gamma or +eta/gamma.
double boundary_identity_rhs(double gamma, double eta);

struct BoundReport {
  int n = 0;
  double gamma = 0.0;
  double integral_term = 0.0;
  double boundary_term = 0.0;
  double total = 0.0;
  double eta_bound = 0.0;
  std::optional<double> measured_dk;
  double reference_rate = 0.0;
};

struct ConditionCheck {
  std::string name;  // e.g. "G-Cond1-1"
  bool passed = false;
  double evidence = 0.0;
  std::string detail;
};

struct ValidationReport {
  double gamma = 0.0;
  std::vector<ConditionCheck> checks;

  bool ok() const;
  const ConditionCheck* first_failure() const;
};

ValidationReport validate_density_profile(double gamma, const DensityProfile& profile);

/// Validates the profile first (throws HypothesisViolation naming the failed
/// condition), then integrates |Gamma| u over (A, B) and adds r_A u(A+).
BoundReport stein_bound(double gamma, const DensityProfile& profile,
                        const numerics::Tolerance& tol = {});

/// Bound obtained from a factorization u = C(x) e^{-x} (gamma == 0) or
/// u = C(x) |x|^{-gamma-1} (gamma != 0): grid supremum of |C'/C| (resp.
/// |gamma|^-1 |x C'/C|) plus the matching boundary summand with C(A+).
double profile_decomposition_bound(double gamma, const Differentiable& C,
                                   const DensityProfile& profile);

}  // namespace freeevt
