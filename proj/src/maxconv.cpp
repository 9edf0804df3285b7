#include "freeevt/maxconv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freeevt/error.hpp"

namespace freeevt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Smallest x where the monotone predicate flips from false to true.
template <class Pred>
double infimum_where(Pred pred, double start) {
  double hi = start;
  double step = 1.0;
  for (int i = 0; !pred(hi); ++i) {
    if (i > 1100) throw Error(ErrorKind::DegeneratePower, "level is never exceeded");
    hi += step;
    step *= 2.0;
  }
  double lo = std::min(start, hi);
  step = 1.0;
  for (int i = 0; pred(lo); ++i) {
    if (i > 1100) return -kInf;
    lo -= step;
    step *= 2.0;
  }
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (pred(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

double finite_hint(const Cdf& F) {
  if (std::isfinite(F.support_lo)) return F.support_lo;
  if (std::isfinite(F.support_hi)) return F.support_hi;
  return 0.0;
}

std::vector<double> merged_breakpoints(std::vector<double> a, const std::vector<double>& b,
                                       double lo) {
  a.insert(a.end(), b.begin(), b.end());
  std::erase_if(a, [lo](double v) { return v < lo; });
  if (std::isfinite(lo)) a.push_back(lo);
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

Cdf free_max_conv_pair(const Cdf& F, const Cdf& G) {
  Cdf H;
  H.survival = [F, G](double x) { return std::min(F.sf(x) + G.sf(x), 1.0); };
  H.cdf = [S = H.survival](double x) { return 1.0 - S(x); };
  if (F.has_density() && G.has_density()) {
    H.density = [F, G](double x) {
      return F.sf(x) + G.sf(x) < 1.0 ? F.density(x) + G.density(x) : 0.0;
    };
  }
  H.support_lo = infimum_where([&](double x) { return F.sf(x) + G.sf(x) < 1.0; },
                               std::max(finite_hint(F), finite_hint(G)));
  H.support_hi = std::max(F.support_hi, G.support_hi);
  H.breakpoints = merged_breakpoints(F.breakpoints, G.breakpoints, H.support_lo);
  return H;
}

Cdf free_max_power(const Cdf& F, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidPower, "free max power needs n >= 1");
  if (n == 1) return F;
  const double dn = n;
  Cdf H;
  H.survival = [F, dn](double x) { return std::min(dn * F.sf(x), 1.0); };
  H.cdf = [S = H.survival](double x) { return 1.0 - S(x); };
  if (F.has_density()) {
    H.density = [F, dn](double x) { return dn * F.sf(x) < 1.0 ? dn * F.density(x) : 0.0; };
  }
  if (F.has_log_density_derivative()) {
    H.log_density_derivative = [F, dn](double x) {
      return dn * F.sf(x) < 1.0 ? F.log_density_derivative(x) : kNaN;
    };
  }
  if (F.quantile) {
    H.quantile = [Q = F.quantile, dn](double p) { return Q(1.0 - (1.0 - p) / dn); };
  }
  H.support_lo = support_left_edge(F, n);
  H.support_hi = F.support_hi;
  H.breakpoints = merged_breakpoints(F.breakpoints, {}, H.support_lo);
  return H;
}

Cdf classical_max_power(const Cdf& F, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidPower, "classical max power needs n >= 1");
  if (n == 1) return F;
  const double dn = n;
  Cdf H;
  H.cdf = [F, dn](double x) { return std::pow(F(x), dn); };
  H.survival = [F, dn](double x) { return -std::expm1(dn * std::log1p(-F.sf(x))); };
  if (F.has_density()) {
    H.density = [F, dn](double x) { return dn * std::pow(F(x), dn - 1) * F.density(x); };
    if (F.has_log_density_derivative()) {
      H.log_density_derivative = [F, dn](double x) {
        return (dn - 1) * F.density(x) / F(x) + F.log_density_derivative(x);
      };
    }
  }
  if (F.quantile) {
    H.quantile = [Q = F.quantile, dn](double p) { return Q(std::pow(p, 1.0 / dn)); };
  }
  H.support_lo = F.support_lo;
  H.support_hi = F.support_hi;
  H.breakpoints = F.breakpoints;
  return H;
}

Cdf renormalize(const Cdf& F, const NormingSequence& s) {
  if (!(s.a > 0) || !std::isfinite(s.a) || !std::isfinite(s.b)) {
    throw Error(ErrorKind::InvalidArgument, "norming requires finite a > 0 and finite b");
  }
  const double a = s.a;
  const double b = s.b;
  Cdf H;
  H.cdf = [F, a, b](double x) { return F(a * x + b); };
  H.survival = [F, a, b](double x) { return F.sf(a * x + b); };
  if (F.has_density()) {
    H.density = [F, a, b](double x) { return a * F.density(a * x + b); };
  }
  if (F.has_log_density_derivative()) {
    H.log_density_derivative = [F, a, b](double x) {
      return a * F.log_density_derivative(a * x + b);
    };
  }
  if (F.quantile) {
    H.quantile = [Q = F.quantile, a, b](double p) { return (Q(p) - b) / a; };
  }
  H.support_lo = (F.support_lo - b) / a;
  H.support_hi = (F.support_hi - b) / a;
  for (double bp : F.breakpoints) H.breakpoints.push_back((bp - b) / a);
  return H;
}

NormingSequence norming_constants(const ExtremeValueLaw& law, int n) {
  if (law.calculus != Calculus::Classical) {
    throw Error(ErrorKind::NoNormingKnown, "norming constants are tabulated for classical laws only");
  }
  validate_law(law);
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  if (law.regime == Regime::Gumbel) return {1.0, std::log(static_cast<double>(n)), n};
  return {std::pow(static_cast<double>(n), 1.0 / law.gamma), 0.0, n};
}

double support_left_edge(const Cdf& F, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidPower, "n must be positive");
  const double dn = n;
  auto above = [&](double x) { return dn * F.sf(x) < 1.0; };

  // F must climb above 1 - 1/n somewhere.
  double top = std::isfinite(F.support_hi) ? F.support_hi : finite_hint(F);
  for (double step = 1.0; !above(top); step *= 2.0) {
    if (std::isfinite(F.support_hi) || step > 1e300) {
      throw Error(ErrorKind::DegeneratePower,
                  "F never exceeds 1 - 1/n for n=" + std::to_string(n));
    }
    top += step;
  }
  if (n == 1) return infimum_where(above, finite_hint(F));

  const double level = 1.0 - 1.0 / dn;
  if (F.quantile) {
    // Closed-form inversion; a flat stretch at the level is resolved by the
    // probe just above the candidate.
    const double x0 = F.quantile(level);
    const double probe = x0 + 1e-12 * std::max(1.0, std::abs(x0));
    if (std::isfinite(x0) && above(probe)) return x0;
  }

  // Bracket with generic quantiles around the level and root-find on
  // 1/n - (1 - F), which is negative below the edge.
  auto g = [&](double x) { return 1.0 / dn - F.sf(x); };
  for (double delta = 1e-6; delta < 1.0; delta *= 10.0) {
    const double plo = std::max(level - delta, 0.5 * level);
    const double phi = std::min(level + delta, 0.5 * (1.0 + level));
    const double lo = quantile(F, plo);
    const double hi = std::min(quantile(F, phi), top);
    if (lo < hi && g(lo) <= 0.0 && g(hi) >= 0.0) {
      numerics::Tolerance tol;
      tol.abs_tol = 1e-14 * std::max(1.0, std::abs(hi));
      // The root is within abs_tol of the edge; a local bisection on the
      // predicate pins down the exact infimum.
      return infimum_where(above, numerics::find_root(g, {lo, hi}, tol));
    }
  }
  return infimum_where(above, finite_hint(F));
}

}  // namespace freeevt
