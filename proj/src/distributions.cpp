#include "freeevt/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "freeevt/error.hpp"

namespace freeevt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinShape = 1e-6;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Cdf classical_gumbel() {
  Cdf F;
  F.cdf = [](double x) { return std::exp(-std::exp(-x)); };
  F.survival = [](double x) { return -std::expm1(-std::exp(-x)); };
  F.density = [](double x) { return std::exp(-x - std::exp(-x)); };
  F.log_density_derivative = [](double x) { return -1.0 + std::exp(-x); };
  F.quantile = [](double p) { return -std::log(-std::log(p)); };
  return F;
}

Cdf classical_frechet(double g) {
  Cdf F;
  F.cdf = [g](double x) { return x > 0 ? std::exp(-std::pow(x, -g)) : 0.0; };
  F.survival = [g](double x) { return x > 0 ? -std::expm1(-std::pow(x, -g)) : 1.0; };
  F.density = [g](double x) {
    return x > 0 ? g * std::pow(x, -g - 1) * std::exp(-std::pow(x, -g)) : 0.0;
  };
  F.log_density_derivative = [g](double x) {
    return x > 0 ? -(g + 1) / x + g * std::pow(x, -g - 1) : kNaN;
  };
  F.quantile = [g](double p) { return std::pow(-std::log(p), -1.0 / g); };
  F.support_lo = 0.0;
  F.breakpoints = {0.0};
  return F;
}

Cdf classical_weibull(double g) {
  Cdf F;
  F.cdf = [g](double x) { return x < 0 ? std::exp(-std::pow(-x, -g)) : 1.0; };
  F.survival = [g](double x) { return x < 0 ? -std::expm1(-std::pow(-x, -g)) : 0.0; };
  F.density = [g](double x) {
    return x < 0 ? -g * std::pow(-x, -g - 1) * std::exp(-std::pow(-x, -g)) : 0.0;
  };
  F.log_density_derivative = [g](double x) {
    return x < 0 ? -(g + 1) / x - g * std::pow(-x, -g - 1) : kNaN;
  };
  F.quantile = [g](double p) { return -std::pow(-std::log(p), -1.0 / g); };
  F.support_hi = 0.0;
  F.breakpoints = {0.0};
  return F;
}

Cdf free_gumbel() {
  Cdf F;
  F.cdf = [](double x) { return x >= 0 ? -std::expm1(-x) : 0.0; };
  F.survival = [](double x) { return x >= 0 ? std::exp(-x) : 1.0; };
  F.density = [](double x) { return x >= 0 ? std::exp(-x) : 0.0; };
  F.log_density_derivative = [](double x) { return x > 0 ? -1.0 : kNaN; };
  F.quantile = [](double p) { return -std::log1p(-p); };
  F.support_lo = 0.0;
  F.breakpoints = {0.0};
  return F;
}

Cdf free_frechet(double g) {
  Cdf F;
  F.cdf = [g](double x) { return x >= 1 ? -std::expm1(-g * std::log(x)) : 0.0; };
  F.survival = [g](double x) { return x >= 1 ? std::pow(x, -g) : 1.0; };
  F.density = [g](double x) { return x >= 1 ? g * std::pow(x, -g - 1) : 0.0; };
  F.log_density_derivative = [g](double x) { return x > 1 ? -(g + 1) / x : kNaN; };
  F.quantile = [g](double p) { return std::pow(1.0 - p, -1.0 / g); };
  F.support_lo = 1.0;
  F.breakpoints = {1.0};
  return F;
}

Cdf free_weibull(double g) {
  Cdf F;
  F.cdf = [g](double x) {
    if (x < -1) return 0.0;
    if (x > 0) return 1.0;
    return -std::expm1(-g * std::log(-x));
  };
  F.survival = [g](double x) {
    if (x < -1) return 1.0;
    if (x > 0) return 0.0;
    return std::pow(-x, -g);
  };
  F.density = [g](double x) { return (x >= -1 && x < 0) ? -g * std::pow(-x, -g - 1) : 0.0; };
  F.log_density_derivative = [g](double x) { return (x > -1 && x < 0) ? -(g + 1) / x : kNaN; };
  F.quantile = [g](double p) { return -std::pow(1.0 - p, -1.0 / g); };
  F.support_lo = -1.0;
  F.support_hi = 0.0;
  F.breakpoints = {-1.0, 0.0};
  return F;
}

}  // namespace

double Cdf::operator()(double x) const { return clamp01(cdf(x)); }

double Cdf::sf(double x) const { return survival ? clamp01(survival(x)) : 1.0 - clamp01(cdf(x)); }

double Cdf::left_limit(double x) const { return (*this)(std::nextafter(x, -kInf)); }

Regime regime_of(double gamma) {
  if (gamma == 0.0) return Regime::Gumbel;
  return gamma > 0 ? Regime::Frechet : Regime::Weibull;
}

std::string to_string(Calculus c) { return c == Calculus::Free ? "free" : "classical"; }

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Gumbel: return "gumbel";
    case Regime::Frechet: return "frechet";
    case Regime::Weibull: return "weibull";
  }
  return "unknown";
}

void validate_law(const ExtremeValueLaw& law) {
  const double g = law.gamma;
  if (!std::isfinite(g)) throw Error(ErrorKind::InvalidLaw, "gamma must be finite");
  switch (law.regime) {
    case Regime::Gumbel:
      if (g != 0.0) throw Error(ErrorKind::InvalidLaw, "gumbel regime requires gamma == 0");
      break;
    case Regime::Frechet:
      if (!(g >= kMinShape)) {
        throw Error(ErrorKind::InvalidLaw, "frechet regime requires gamma >= 1e-6");
      }
      break;
    case Regime::Weibull:
      if (!(g <= -kMinShape)) {
        throw Error(ErrorKind::InvalidLaw, "weibull regime requires gamma <= -1e-6");
      }
      break;
  }
}

Cdf make_law(const ExtremeValueLaw& law) {
  validate_law(law);
  const bool free = law.calculus == Calculus::Free;
  switch (law.regime) {
    case Regime::Gumbel: return free ? free_gumbel() : classical_gumbel();
    case Regime::Frechet: return free ? free_frechet(law.gamma) : classical_frechet(law.gamma);
    case Regime::Weibull: return free ? free_weibull(law.gamma) : classical_weibull(law.gamma);
  }
  throw Error(ErrorKind::InvalidLaw, "unknown regime");
}

double eval_cdf(const Cdf& F, double x) { return F(x); }

double quantile(const Cdf& F, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidProbability, "p must lie in (0, 1), got " + std::to_string(p));
  }
  if (F.quantile) return F.quantile(p);

  // Bracket [lo, hi] with F(lo) < p <= F(hi), then bisect for the infimum.
  double start = 0.0;
  if (std::isfinite(F.support_lo)) start = F.support_lo;
  else if (std::isfinite(F.support_hi)) start = F.support_hi;
  double hi = start;
  double step = 1.0;
  for (int i = 0; F(hi) < p; ++i) {
    if (i > 2000) throw Error(ErrorKind::InvalidProbability, "quantile bracket not found");
    hi += step;
    step *= 2.0;
  }
  double lo = std::min(start, hi);
  step = 1.0;
  for (int i = 0; F(lo) >= p; ++i) {
    if (i > 2000) throw Error(ErrorKind::InvalidProbability, "quantile bracket not found");
    lo -= step;
    step *= 2.0;
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (F(mid) >= p) hi = mid;
    else lo = mid;
  }
  return hi;
}

void TabulatedCdf::validate() const {
  if (x.size() != F.size()) throw Error(ErrorKind::InvalidArgument, "x and F differ in length");
  if (x.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two knots");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(F[i])) {
      throw Error(ErrorKind::InvalidArgument, "knots must be finite");
    }
    if (F[i] < 0.0 || F[i] > 1.0) throw Error(ErrorKind::InvalidArgument, "F outside [0, 1]");
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "x must be strictly increasing");
    }
    if (i > 0 && F[i] < F[i - 1]) throw Error(ErrorKind::InvalidArgument, "F must be nondecreasing");
  }
}

Cdf make_tabulated(TabulatedCdf table) {
  table.validate();
  auto t = std::make_shared<const TabulatedCdf>(std::move(table));

  // Index of the segment [x_i, x_{i+1}) containing v; assumes x_0 <= v < x_last.
  auto segment = [t](double v) {
    auto it = std::upper_bound(t->x.begin(), t->x.end(), v);
    return static_cast<std::size_t>(std::distance(t->x.begin(), it)) - 1;
  };

  Cdf F;
  F.cdf = [t, segment](double v) {
    if (v < t->x.front()) return 0.0;
    if (v >= t->x.back()) return 1.0;
    const std::size_t i = segment(v);
    const double w = (v - t->x[i]) / (t->x[i + 1] - t->x[i]);
    return t->F[i] + (t->F[i + 1] - t->F[i]) * w;
  };
  F.density = [t, segment](double v) {
    if (v < t->x.front() || v >= t->x.back()) return 0.0;
    const std::size_t i = segment(v);
    return (t->F[i + 1] - t->F[i]) / (t->x[i + 1] - t->x[i]);
  };
  F.log_density_derivative = [t, segment](double v) {
    if (v <= t->x.front() || v >= t->x.back()) return kNaN;
    const std::size_t i = segment(v);
    return t->F[i + 1] > t->F[i] ? 0.0 : kNaN;
  };
  F.quantile = [t](double p) {
    if (t->F.front() >= p) return t->x.front();
    for (std::size_t i = 0; i + 1 < t->x.size(); ++i) {
      if (t->F[i] < p && p <= t->F[i + 1]) {
        return t->x[i] + (p - t->F[i]) / (t->F[i + 1] - t->F[i]) * (t->x[i + 1] - t->x[i]);
      }
    }
    return t->x.back();
  };
  F.support_lo = t->x.front();
  F.support_hi = t->x.back();
  F.breakpoints = t->x;
  return F;
}

TabulatedCdf tabulate(const Cdf& F, std::span<const double> points) {
  TabulatedCdf table;
  table.x.assign(points.begin(), points.end());
  table.F.reserve(points.size());
  double running = 0.0;
  for (double p : points) {
    running = std::max(running, F(p));
    table.F.push_back(running);
  }
  table.validate();
  return table;
}

Cdf point_mass(double c) {
  Cdf F;
  F.cdf = [c](double x) { return x >= c ? 1.0 : 0.0; };
  F.quantile = [c](double) { return c; };
  F.support_lo = c;
  F.support_hi = c;
  F.breakpoints = {c};
  return F;
}

Cdf uniform(double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "uniform requires lo < hi");
  const double w = hi - lo;
  Cdf F;
  F.cdf = [lo, hi, w](double x) { return x <= lo ? 0.0 : (x >= hi ? 1.0 : (x - lo) / w); };
  F.survival = [lo, hi, w](double x) { return x <= lo ? 1.0 : (x >= hi ? 0.0 : (hi - x) / w); };
  F.density = [lo, hi, w](double x) { return (x >= lo && x < hi) ? 1.0 / w : 0.0; };
  F.log_density_derivative = [lo, hi](double x) { return (x > lo && x < hi) ? 0.0 : kNaN; };
  F.quantile = [lo, w](double p) { return lo + p * w; };
  F.support_lo = lo;
  F.support_hi = hi;
  F.breakpoints = {lo, hi};
  return F;
}

}  // namespace freeevt
