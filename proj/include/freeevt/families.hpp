#pragma once

// Renormalized free max powers W_n of the classical laws Phi_gamma, in closed
// form, and the same construction for a user-supplied sample law U.

#include "freeevt/distributions.hpp"
#include "freeevt/maxconv.hpp"
#include "freeevt/stein.hpp"

namespace freeevt {

struct WorkedFamily {
  double gamma = 0.0;
  int n = 2;
  Cdf cdf;                  // distribution function of W_n
  DensityProfile profile;   // u_n, rho_n, A_n, B_n, u_n(A_n+)
  NormingSequence norming;
  // C_n with u_n = C_n(x) e^{-x} (gamma == 0) or C_n(x) |x|^{-gamma-1};
  // only set for the closed-form families.
  std::optional<Differentiable> factor;
  // Set when rho_n had to be obtained by numerical differentiation.
  bool rho_numeric = false;
};

/// -n log(1 - 1/n), evaluated through log1p. Tends to 1 from above.
double cut_level(int n);

WorkedFamily gumbel_family(int n);
WorkedFamily frechet_family(double gamma, int n);
WorkedFamily weibull_family(double gamma, int n);

// Dispatches on the sign of gamma.
WorkedFamily worked_family(double gamma, int n);

/// x -> U^{[v] n}(a x + b) with n = norming.n. The density comes from U's
/// density when present (numerical differentiation otherwise), rho_n from
/// U's log-density derivative by the chain rule (numerically otherwise), and
/// A_n from support_left_edge.
WorkedFamily generic_family(const Cdf& U, double gamma, const NormingSequence& norming);

}  // namespace freeevt
