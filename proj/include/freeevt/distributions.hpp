#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freeevt/numerics.hpp"

namespace freeevt {

/// A distribution function on the real line together with whatever extra
/// structure is known in closed form.
///
/// Only `cdf` is mandatory. `survival` (1 - F) is kept separately so that
/// free max powers, which act on the upper tail, can stay exact; when it is
/// empty it is derived as 1 - cdf. Values are immutable once built and the
/// stored callables must be safe to call concurrently.
struct Cdf {
  RealFn cdf;
  RealFn survival;
  RealFn density;
  RealFn log_density_derivative;
  RealFn quantile;  // closed-form generalized inverse on (0, 1), if known

  double support_lo = -kInf;
  double support_hi = kInf;
  // Points where F or its density is not smooth (kinks, jumps, support edges).
  std::vector<double> breakpoints;

  double operator()(double x) const;
  double sf(double x) const;
  double left_limit(double x) const;

  bool has_density() const { return static_cast<bool>(density); }
  bool has_log_density_derivative() const { return static_cast<bool>(log_density_derivative); }
};

enum class Calculus { Classical, Free };
enum class Regime { Gumbel, Frechet, Weibull };

// Classical Phi_gamma or free Psi_gamma. Regime and gamma must agree:
// Gumbel <-> gamma == 0, Frechet <-> gamma > 0, Weibull <-> gamma < 0.
struct ExtremeValueLaw {
  Calculus calculus = Calculus::Free;
  Regime regime = Regime::Gumbel;
  double gamma = 0.0;
};

Regime regime_of(double gamma);
std::string to_string(Calculus c);
std::string to_string(Regime r);

// Throws "invalid law" when gamma is inconsistent with the regime, or when
// |gamma| < 1e-6 for Frechet/Weibull.
void validate_law(const ExtremeValueLaw& law);

Cdf make_law(const ExtremeValueLaw& law);
inline Cdf classical_law(double gamma) { return make_law({Calculus::Classical, regime_of(gamma), gamma}); }
inline Cdf free_law(double gamma) { return make_law({Calculus::Free, regime_of(gamma), gamma}); }

/// F(x) clamped to [0, 1].
double eval_cdf(const Cdf& F, double x);

/// inf{x : F(x) >= p} for p in (0, 1); closed form when available,
/// otherwise a bracketed bisection on F.
double quantile(const Cdf& F, double p);

// Piecewise-linear distribution function through the knots (x_i, F_i).
// F = 0 left of the first knot and 1 from the last knot on.
struct TabulatedCdf {
  std::vector<double> x;
  std::vector<double> F;

  // Throws "invalid argument" unless x strictly increases and F is
  // nondecreasing inside [0, 1] with matching lengths (at least 2 knots).
  void validate() const;
};

Cdf make_tabulated(TabulatedCdf table);

// Tabulate F at the given (strictly increasing) points.
TabulatedCdf tabulate(const Cdf& F, std::span<const double> points);

// Step function 1_[c, inf).
Cdf point_mass(double c);

// Uniform law on [lo, hi]; convenient in tests and examples.
Cdf uniform(double lo = 0.0, double hi = 1.0);

}  // namespace freeevt
