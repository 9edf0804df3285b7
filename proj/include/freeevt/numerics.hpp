#pragma once

// Deterministic numerical kernel: adaptive quadrature on finite and
// semi-infinite intervals, bracketing root finding, Richardson-extrapolated
// differentiation and one-sided limits. Everything here is a pure function
// of its arguments.

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace freeevt {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace numerics {

// Open or closed interval with lo < hi. Either endpoint may be infinite
// (integrate() accepts at most one infinite endpoint).
struct Interval {
  double lo;
  double hi;
};

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  // Maximum bisection depth of any single panel.
  int max_refinements = 60;
};

enum class Side { FromAbove, FromBelow };

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature with global bisection.
///
/// Semi-infinite pieces are mapped onto a unit interval with
/// t = a + s/(1-s) (or its mirror image). Panels are never allowed to
/// straddle any of the supplied breakpoints. Throws `QuadratureFailure`
/// (with the partial estimate) when the requested tolerance cannot be met,
/// and a domain error if `f` returns NaN or an infinite value.
QuadratureResult integrate_detailed(const RealFn& f, Interval iv, const Tolerance& tol = {},
                                    std::span<const double> breakpoints = {});

double integrate(const RealFn& f, Interval iv, const Tolerance& tol = {},
                 std::span<const double> breakpoints = {});

/// Root of `g` inside a finite bracket with g(lo)*g(hi) <= 0. The bracket
/// is shrunk until its width is at most `tol.abs_tol` (or a few ulps).
double find_root(const RealFn& g, Interval bracket, const Tolerance& tol = {});

/// Central differences with Richardson extrapolation (Ridders). The initial
/// step is 0.1 * scale, so `scale` must keep x +- scale inside the domain.
double differentiate(const RealFn& f, double x, double scale = 1.0);

/// Limit of f(t) as t -> a from the given side. Samples at a +- h0 2^-k
/// and extrapolates; `initial_step <= 0` picks 1e-3 * max(1, |a|).
double one_sided_limit(const RealFn& f, double a, Side side, double initial_step = 0.0);

// Points strictly inside (lo, hi), uniformly spread plus geometric clusters
// approaching each endpoint. Infinite endpoints are reached through the
// same mapping the integrator uses.
std::vector<double> interior_grid(double lo, double hi, int count = 400);

}  // namespace numerics
}  // namespace freeevt
