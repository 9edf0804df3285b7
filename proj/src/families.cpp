#include "freeevt/families.hpp"

#include <cmath>
#include <limits>

#include "freeevt/error.hpp"

namespace freeevt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_n(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "requires n >= 2, got " + std::to_string(n));
}

// 1 - F = min{n (1 - exp(-y/n)), 1} for the power of exp(-y).
double powered_survival(double y, double dn) {
  return std::min(-dn * std::expm1(-y / dn), 1.0);
}

// y with n (1 - exp(-y/n)) = 1 - p.
double level_for(double p, double dn) { return -dn * std::log1p(-(1.0 - p) / dn); }

}  // namespace

double cut_level(int n) {
  require_n(n);
  const double dn = n;
  return -dn * std::log1p(-1.0 / dn);
}

WorkedFamily gumbel_family(int n) {
  require_n(n);
  const double dn = n;
  const double L = cut_level(n);
  const double A = -std::log(L);

  WorkedFamily fam;
  fam.gamma = 0.0;
  fam.n = n;
  fam.norming = {1.0, std::log(dn), n};

  Cdf& F = fam.cdf;
  F.survival = [dn](double t) { return powered_survival(std::exp(-t), dn); };
  F.cdf = [dn](double t) { return std::max(1.0 - powered_survival(std::exp(-t), dn), 0.0); };
  F.density = [A, dn](double t) { return t > A ? std::exp(-t - std::exp(-t) / dn) : 0.0; };
  F.log_density_derivative = [A, dn](double t) { return t > A ? -1.0 + std::exp(-t) / dn : kNaN; };
  F.quantile = [dn](double p) { return -std::log(level_for(p, dn)); };
  F.support_lo = A;
  F.breakpoints = {A};

  fam.profile = {F.density, F.log_density_derivative, A, kInf,
                 (1.0 - 1.0 / dn) * L,  // -(n-1) log(1 - 1/n)
                 n, true};

  auto C = [dn](double x) { return std::exp(-std::exp(-x) / dn); };
  fam.factor = Differentiable{C, [C, dn](double x) { return C(x) * std::exp(-x) / dn; }};
  return fam;
}

WorkedFamily frechet_family(double gamma, int n) {
  if (!(gamma > 0)) throw Error(ErrorKind::InvalidArgument, "frechet family needs gamma > 0");
  require_n(n);
  const double g = gamma;
  const double dn = n;
  const double L = cut_level(n);
  const double A = std::pow(L, -1.0 / g);

  WorkedFamily fam;
  fam.gamma = g;
  fam.n = n;
  fam.norming = {std::pow(dn, 1.0 / g), 0.0, n};

  Cdf& F = fam.cdf;
  F.survival = [g, dn](double t) { return t > 0 ? powered_survival(std::pow(t, -g), dn) : 1.0; };
  F.cdf = [S = F.survival](double t) { return std::max(1.0 - S(t), 0.0); };
  F.density = [A, g, dn](double t) {
    return t > A ? g * std::pow(t, -g - 1) * std::exp(-std::pow(t, -g) / dn) : 0.0;
  };
  F.log_density_derivative = [A, g, dn](double t) {
    return t > A ? -(g + 1) / t + g / dn * std::pow(t, -g - 1) : kNaN;
  };
  F.quantile = [g, dn](double p) { return std::pow(level_for(p, dn), -1.0 / g); };
  F.support_lo = A;
  F.breakpoints = {A};

  // lim t u(t) = -gamma (n-1) log(1 - 1/n) at A+.
  fam.profile = {F.density, F.log_density_derivative, A, kInf, g * (1.0 - 1.0 / dn) * L / A, n,
                 true};

  auto C = [g, dn](double x) { return g * std::exp(-std::pow(x, -g) / dn); };
  fam.factor =
      Differentiable{C, [C, g, dn](double x) { return C(x) * g * std::pow(x, -g - 1) / dn; }};
  return fam;
}

WorkedFamily weibull_family(double gamma, int n) {
  if (!(gamma < 0)) throw Error(ErrorKind::InvalidArgument, "weibull family needs gamma < 0");
  require_n(n);
  const double g = gamma;
  const double dn = n;
  const double L = cut_level(n);
  const double A = -std::pow(L, -1.0 / g);

  WorkedFamily fam;
  fam.gamma = g;
  fam.n = n;
  fam.norming = {std::pow(dn, 1.0 / g), 0.0, n};

  Cdf& F = fam.cdf;
  F.survival = [g, dn](double t) { return t < 0 ? powered_survival(std::pow(-t, -g), dn) : 0.0; };
  F.cdf = [S = F.survival](double t) { return std::max(1.0 - S(t), 0.0); };
  F.density = [A, g, dn](double t) {
    return (t > A && t < 0) ? -g * std::pow(-t, -g - 1) * std::exp(-std::pow(-t, -g) / dn) : 0.0;
  };
  F.log_density_derivative = [A, g, dn](double t) {
    return (t > A && t < 0) ? -(g + 1) / t - g / dn * std::pow(-t, -g - 1) : kNaN;
  };
  F.quantile = [g, dn](double p) { return -std::pow(level_for(p, dn), -1.0 / g); };
  F.support_lo = A;
  F.support_hi = 0.0;
  F.breakpoints = {A, 0.0};

  // lim |t| u(t) = gamma (n-1) log(1 - 1/n) at A+.
  fam.profile = {F.density, F.log_density_derivative, A, 0.0,
                 -g * (1.0 - 1.0 / dn) * L / std::abs(A), n, true};

  auto C = [g, dn](double x) { return -g * std::exp(-std::pow(-x, -g) / dn); };
  fam.factor =
      Differentiable{C, [C, g, dn](double x) { return -C(x) * g * std::pow(-x, -g - 1) / dn; }};
  return fam;
}

WorkedFamily worked_family(double gamma, int n) {
  if (gamma == 0.0) return gumbel_family(n);
  return gamma > 0 ? frechet_family(gamma, n) : weibull_family(gamma, n);
}

WorkedFamily generic_family(const Cdf& U, double gamma, const NormingSequence& norming) {
  const int n = norming.n;
  require_n(n);
  const double dn = n;
  const double a = norming.a;
  const double b = norming.b;

  WorkedFamily fam;
  fam.gamma = gamma;
  fam.n = n;
  fam.norming = norming;
  fam.cdf = renormalize(free_max_power(U, n), norming);

  const double A = fam.cdf.support_lo;
  const double B = fam.cdf.support_hi;
  // Guard against evaluating the log-derivative right at the cut.
  const double margin = 1e-12 * std::max(1.0, std::abs(A));

  RealFn u;
  if (U.has_density()) {
    u = [U, a, b, dn, A](double x) { return x > A ? dn * a * U.density(a * x + b) : 0.0; };
  } else {
    for (double bp : U.breakpoints) {
      if (U.left_limit(bp) != U(bp)) {
        throw Error(ErrorKind::NoDensity, "sample law has an atom at " + std::to_string(bp));
      }
    }
    u = [F = fam.cdf, A, B](double x) {
      if (!(x > A && x < B)) return 0.0;
      double room = 1.0;
      room = std::min(room, x - A);
      if (std::isfinite(B)) room = std::min(room, B - x);
      return std::max(numerics::differentiate(F, x, 0.5 * room), 0.0);
    };
    fam.rho_numeric = true;
  }

  RealFn rho;
  if (U.has_density() && U.has_log_density_derivative()) {
    rho = [U, a, b, A, margin](double x) {
      return a * U.log_density_derivative(a * std::max(x, A + margin) + b);
    };
  } else {
    rho = [u, A, B, margin](double x) {
      const double t = std::max(x, A + margin);
      double room = std::min(1.0, t - A);
      if (std::isfinite(B)) room = std::min(room, B - t);
      return numerics::differentiate([&u](double s) { return std::log(u(s)); }, t, 0.5 * room);
    };
    fam.rho_numeric = true;
  }

  double h0 = 1e-3 * std::max(1.0, std::abs(A));
  if (std::isfinite(B)) h0 = std::min(h0, (B - A) / 8.0);
  const double edge = numerics::one_sided_limit(u, A, numerics::Side::FromAbove, h0);

  fam.cdf.density = u;
  fam.cdf.log_density_derivative = rho;
  fam.profile = {u, rho, A, B, edge, n, false};
  return fam;
}

}  // namespace freeevt
