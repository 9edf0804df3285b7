#include "freeevt/stein.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freeevt/error.hpp"

namespace freeevt {
namespace {

void require_in_support(const DensityProfile& p, double w) {
  if (!(w > p.A && w < p.B)) {
    std::ostringstream msg;
    msg << "w=" << w << " outside (" << p.A << ", " << p.B << ")";
    throw Error(ErrorKind::DomainError, msg.str());
  }
}

// Derivative step scale that keeps w +- 0.1 * scale inside (lo, hi).
double step_scale(double w, double lo, double hi) {
  double room = 1.0;
  if (std::isfinite(lo)) room = std::min(room, w - lo);
  if (std::isfinite(hi)) room = std::min(room, hi - w);
  return 0.5 * room;
}

double operator_domain_scale(double gamma, double w) {
  if (gamma > 0) return step_scale(w, 0.0, kInf);
  if (gamma < 0) return step_scale(w, -kInf, 0.0);
  return 1.0;
}

// J_{gamma,n} phi(w) without the support check.
double density_operator_value(double gamma, const DensityProfile& p, double phi, double dphi,
                              double w) {
  const double rho = p.rho(w);
  if (gamma == 0.0) return dphi + phi * rho;
  const double inner = w * dphi + phi * (1.0 + w * rho);
  return gamma > 0 ? inner / gamma : -inner / gamma;
}

double gamma_functional_value(double gamma, const DensityProfile& p, double x) {
  const double rho = p.rho(x);
  if (gamma == 0.0) return 1.0 + rho;
  return 1.0 + (1.0 + x * rho) / gamma;
}

// (|A| ^ |A|^-1)^k computed as exp(k log min), returned as 1 - that value.
double one_minus_min_power(double A, double k) {
  const double m = std::min(std::abs(A), 1.0 / std::abs(A));
  return -std::expm1(k * std::log(m));
}

void require_edge_sign(double gamma, double A) {
  if (gamma > 0 && !(A > 0)) {
    throw Error(ErrorKind::DomainError, "gamma > 0 requires A > 0");
  }
  if (gamma < 0 && !(A < 0)) {
    throw Error(ErrorKind::DomainError, "gamma < 0 requires A < 0");
  }
}

double edge_step(const DensityProfile& p) {
  double h = 1e-3 * std::max(1.0, std::abs(p.A));
  if (std::isfinite(p.B)) h = std::min(h, (p.B - p.A) / 8.0);
  return h;
}

}  // namespace

double Differentiable::slope(double w, double scale) const {
  if (derivative) return derivative(w);
  return numerics::differentiate(value, w, scale);
}

double free_extreme_value_cdf(double gamma, double x) {
  if (gamma == 0.0) return x >= 0 ? -std::expm1(-x) : 0.0;
  if (gamma > 0) return x >= 1 ? -std::expm1(-gamma * std::log(x)) : 0.0;
  if (x < -1) return 0.0;
  if (x > 0) return 1.0;
  return -std::expm1(-gamma * std::log(-x));
}

SteinSolution::SteinSolution(double gamma, double x)
    : gamma_(gamma), x_(x), psi_x_(free_extreme_value_cdf(gamma, x)) {
  if (!std::isfinite(gamma) || !std::isfinite(x)) {
    throw Error(ErrorKind::InvalidArgument, "Stein solution needs finite gamma and x");
  }
}

bool SteinSolution::in_domain(double w) const {
  if (gamma_ > 0) return w > 0;
  if (gamma_ < 0) return w < 0;
  return std::isfinite(w);
}

double SteinSolution::operator()(double w) const {
  if (!in_domain(w)) {
    throw Error(ErrorKind::DomainError, "w=" + std::to_string(w) + " outside the half-line");
  }
  if (gamma_ == 0.0) return w <= x_ ? std::expm1(w - x_) + psi_x_ : psi_x_;
  if (gamma_ > 0) {
    if (x_ <= 0) return 0.0;
    return w <= x_ ? std::pow(w / x_, gamma_) - 1.0 + psi_x_ : psi_x_;
  }
  if (x_ >= 0) return 0.0;
  return w <= x_ ? 1.0 - std::pow(-w, gamma_) * std::pow(-x_, -gamma_) - psi_x_ : -psi_x_;
}

double SteinSolution::derivative(double w) const {
  if (!in_domain(w)) {
    throw Error(ErrorKind::DomainError, "w=" + std::to_string(w) + " outside the half-line");
  }
  if (w > x_) return 0.0;
  if (gamma_ == 0.0) return std::exp(w - x_);
  if (gamma_ > 0) {
    if (x_ <= 0) return 0.0;
    return gamma_ * std::pow(w, gamma_ - 1) * std::pow(x_, -gamma_);
  }
  if (x_ >= 0) return 0.0;
  return gamma_ * std::pow(-w, gamma_ - 1) * std::pow(-x_, -gamma_);
}

Differentiable SteinSolution::as_differentiable() const {
  return {[s = *this](double w) { return s(w); }, [s = *this](double w) { return s.derivative(w); }};
}

double stein_solution_eval(const SteinSolution& sol, double w) { return sol(w); }

double apply_stein_operator(double gamma, const Differentiable& phi, double w) {
  if ((gamma > 0 && !(w > 0)) || (gamma < 0 && !(w < 0)) || !std::isfinite(w)) {
    throw Error(ErrorKind::DomainError, "w=" + std::to_string(w) + " outside operator domain");
  }
  const double value = phi(w);
  const double slope = phi.slope(w, operator_domain_scale(gamma, w));
  if (gamma == 0.0) return slope - value;
  if (gamma > 0) return w * slope / gamma - value;
  return -w * slope / gamma + value;
}

double apply_density_operator(double gamma, const DensityProfile& profile,
                              const Differentiable& phi, double w) {
  require_in_support(profile, w);
  const double slope = phi.slope(w, step_scale(w, profile.A, profile.B));
  return density_operator_value(gamma, profile, phi(w), slope, w);
}

double gamma_functional(double gamma, const DensityProfile& profile, double x) {
  require_in_support(profile, x);
  return gamma_functional_value(gamma, profile, x);
}

double remainder_term(double gamma, double A) {
  if (!std::isfinite(A)) throw Error(ErrorKind::DomainError, "A must be finite");
  if (gamma == 0.0) return -std::expm1(-std::abs(A));
  require_edge_sign(gamma, A);
  return A / gamma * one_minus_min_power(A, std::abs(gamma));
}

double eta_boundary_bound(double gamma, const DensityProfile& profile) {
  const double A = profile.A;
  const double u = profile.edge_density;
  if (u == 0.0) return 0.0;
  if (gamma == 0.0) return -std::expm1(-std::abs(A)) * u;
  require_edge_sign(gamma, A);
  return std::abs(A) * one_minus_min_power(A, std::abs(gamma)) * u;
}

double eta_boundary_numeric(double gamma, const DensityProfile& profile, double x) {
  const SteinSolution sol(gamma, x);
  double h0 = edge_step(profile);
  if (x > profile.A) h0 = std::min(h0, 0.25 * (x - profile.A));
  RealFn f;
  if (gamma == 0.0) {
    f = [&](double t) { return sol(t) * profile.u(t); };
  } else {
    f = [&](double t) { return t * sol(t) * profile.u(t); };
  }
  return numerics::one_sided_limit(f, profile.A, numerics::Side::FromAbove, h0);
}

double density_operator_expectation(double gamma, const DensityProfile& profile, double x,
                                    const numerics::Tolerance& tol) {
  const SteinSolution sol(gamma, x);
  auto integrand = [&](double t) {
    const double u = profile.u(t);
    if (u == 0.0) return 0.0;
    return density_operator_value(gamma, profile, sol(t), sol.derivative(t), t) * u;
  };
  const double bp[] = {x};
  return numerics::integrate(integrand, {profile.A, profile.B}, tol, bp);
}

double boundary_identity_rhs(double gamma, double eta) {
  if (gamma == 0.0) return -eta;
  return gamma > 0 ? -eta / gamma : eta / gamma;
}

bool ValidationReport::ok() const { return first_failure() == nullptr; }

const ConditionCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

namespace {

// Largest |h| while approaching the edge at `edge` from inside, at offsets
// width * 2^-k for k = k0..k1.
double approach_max(const RealFn& h, double edge, double dir, double width, int k0, int k1) {
  double m = 0.0;
  for (int k = k0; k <= k1; ++k) {
    const double t = edge + dir * width * std::ldexp(1.0, -k);
    m = std::max(m, std::abs(h(t)));
  }
  return m;
}

// True when |h| keeps growing as t approaches an edge of (A, B) (or
// infinity); a bounded function levels off.
bool grows_at_edges(const RealFn& h, double A, double B) {
  const double width = std::isfinite(B) ? (B - A) / 2 : std::max(1.0, std::abs(A));
  const double near = approach_max(h, A, 1.0, width, 30, 34);
  const double nearer = approach_max(h, A, 1.0, width, 40, 44);
  if (!std::isfinite(nearer) || nearer > 10.0 * near + 1.0) return true;
  if (std::isfinite(B)) {
    const double nb = approach_max(h, B, -1.0, width, 30, 34);
    const double nnb = approach_max(h, B, -1.0, width, 40, 44);
    if (!std::isfinite(nnb) || nnb > 10.0 * nb + 1.0) return true;
  } else {
    double far = 0.0;
    double farther = 0.0;
    for (int k = 30; k <= 34; ++k) far = std::max(far, std::abs(h(A + std::ldexp(1.0, k))));
    for (int k = 40; k <= 44; ++k) farther = std::max(farther, std::abs(h(A + std::ldexp(1.0, k))));
    if (!std::isfinite(farther) || farther > 10.0 * far + 1.0) return true;
  }
  return false;
}

// lim of g at the upper edge B from below (B may be infinite).
double upper_edge_limit(const RealFn& g, const DensityProfile& p) {
  if (std::isinf(p.B)) {
    double last = g(p.A + 1.0);
    const double base = std::max(1.0, std::abs(p.A));
    for (int k = 10; k <= 1000; k += 10) {
      const double t = p.A + base * std::ldexp(1.0, k);
      if (!std::isfinite(t)) break;
      const double v = g(t);
      if (std::isnan(v)) break;
      last = v;
    }
    return last;
  }
  const double h0 = std::min(1e-3 * std::max(1.0, std::abs(p.B)), (p.B - p.A) / 8.0);
  try {
    return numerics::one_sided_limit(g, p.B, numerics::Side::FromBelow, h0);
  } catch (const Error&) {
    return g(p.B - h0 * 1e-12);
  }
}

}  // namespace

ValidationReport validate_density_profile(double gamma, const DensityProfile& p) {
  ValidationReport report;
  report.gamma = gamma;
  const std::string tag = gamma == 0.0 ? "G" : (gamma > 0 ? "F" : "W");
  auto add = [&](std::string suffix, bool ok, double evidence, std::string detail) {
    report.checks.push_back({tag + "-" + suffix, ok, evidence, std::move(detail)});
  };

  // Cond1: support is a nondegenerate interval with finite left edge.
  bool support_ok = std::isfinite(p.A) && p.A < p.B && p.u && p.rho;
  std::string support_detail = "supp(u_n) = [A, B] with u_n > 0 inside";
  if (gamma > 0 && !(p.A > 0)) {
    support_ok = false;
    support_detail = "requires 0 < A";
  }
  if (gamma < 0 && !(p.B <= 0)) {
    support_ok = false;
    support_detail = "requires B <= 0";
  }
  double min_u = kInf;
  std::vector<double> grid;
  if (support_ok) {
    grid = numerics::interior_grid(p.A, p.B, 400);
    // An infinite tail may underflow to zero; positivity is only demanded
    // where u is resolvable in double precision.
    const double resolvable = p.A + 700.0 * std::max(1.0, std::abs(p.A));
    for (double t : grid) {
      const double u = p.u(t);
      if (std::isnan(u) || u < 0) min_u = -1.0;
      else if (u > 0) min_u = std::min(min_u, u);
      else if (std::isfinite(p.B) || t <= resolvable) min_u = std::min(min_u, 0.0);
    }
    if (!(min_u > 0)) {
      support_ok = false;
      support_detail = "u_n not positive on (A, B)";
    }
  }
  add("Cond1", support_ok, min_u, support_detail);
  if (!support_ok) return report;

  // Cond1-1: finite limit at A+ (of u or t*u), vanishing limit at B-.
  RealFn weighted = gamma == 0.0 ? RealFn(p.u) : RealFn([&p](double t) { return t * p.u(t); });
  {
    double lower = 0.0;
    bool ok = true;
    std::string detail = gamma == 0.0 ? "u_n(A+) finite and u_n(B-) = 0"
                                      : "t u_n(t) finite at A+ and -> 0 at B-";
    try {
      lower = numerics::one_sided_limit(p.u, p.A, numerics::Side::FromAbove, edge_step(p));
    } catch (const Error& e) {
      ok = false;
      detail = std::string("u_n(A+) not detected: ") + e.what();
    }
    if (ok && (!std::isfinite(lower) || lower < -1e-12)) {
      ok = false;
      detail = "u_n(A+) is not a finite nonnegative number";
    }
    const double scale = std::max(1.0, std::abs(lower));
    if (ok && std::abs(lower - p.edge_density) > 1e-6 * scale) {
      ok = false;
      detail = "edge density " + std::to_string(p.edge_density) +
               " disagrees with numeric limit " + std::to_string(lower);
    }
    double upper = 0.0;
    if (ok) {
      double peak = 0.0;
      for (double t : grid) {
        const double v = std::abs(weighted(t));
        if (std::isfinite(v)) peak = std::max(peak, v);
      }
      upper = upper_edge_limit(weighted, p);
      if (!(std::abs(upper) <= 1e-8 * std::max(1.0, peak))) {
        ok = false;
        detail = (gamma == 0.0 ? "u_n(B-) = " : "t u_n(t) at B- = ") + std::to_string(upper) +
                 " does not vanish";
      }
    }
    add("Cond1-1", ok, ok ? lower : upper, detail);
  }

  // Cond2: u differentiable, checked through (log u)' against rho.
  {
    double worst = 0.0;
    bool ok = true;
    std::string detail = "(log u_n)' agrees with rho_n";
    std::vector<double> probes;
    for (int i = 1; i < 30; ++i) {
      const double r = i / 30.0;
      if (std::isfinite(p.B)) probes.push_back(p.A + (p.B - p.A) * r);
      else probes.push_back(p.A + std::max(1.0, std::abs(p.A)) * (1.0 - r) / r);
    }
    auto log_u = [&p](double t) { return std::log(p.u(t)); };
    for (double t : probes) {
      const double u = p.u(t);
      if (!(u > 1e-250)) continue;
      try {
        const double numeric = numerics::differentiate(log_u, t, step_scale(t, p.A, p.B));
        const double exact = p.rho(t);
        const double mismatch = std::abs(numeric - exact) / (1.0 + std::abs(exact));
        if (!std::isfinite(mismatch)) throw Error(ErrorKind::DomainError, "non-finite rho");
        worst = std::max(worst, mismatch);
      } catch (const Error& e) {
        ok = false;
        detail = std::string("u_n not differentiable near t=") + std::to_string(t) + ": " + e.what();
        break;
      }
    }
    if (ok && worst > 1e-5) {
      ok = false;
      detail = "rho_n differs from (log u_n)' by " + std::to_string(worst);
    }
    add("Cond2", ok, worst, detail);
  }

  // Cond3 / Cond4: rho (gamma == 0) or t*rho (gamma != 0) bounded and continuous.
  {
    RealFn h = gamma == 0.0 ? RealFn(p.rho) : RealFn([&p](double t) { return t * p.rho(t); });
    double sup = 0.0;
    bool finite = true;
    for (double t : grid) {
      const double v = h(t);
      if (!std::isfinite(v)) {
        finite = false;
        break;
      }
      sup = std::max(sup, std::abs(v));
    }
    const bool ok = finite && !grows_at_edges(h, p.A, p.B);
    const std::string what = gamma == 0.0 ? "rho_n" : "t*rho_n";
    add(gamma == 0.0 ? "Cond3" : "Cond4", ok, sup,
        ok ? what + " bounded and continuous" : what + " unbounded");
  }
  return report;
}

BoundReport stein_bound(double gamma, const DensityProfile& profile,
                        const numerics::Tolerance& tol) {
  const ValidationReport report = validate_density_profile(gamma, profile);
  if (const auto* failed = report.first_failure()) {
    throw HypothesisViolation(failed->name, failed->detail);
  }
  auto integrand = [&](double t) {
    const double u = profile.u(t);
    if (u == 0.0) return 0.0;
    return std::abs(gamma_functional_value(gamma, profile, t)) * u;
  };
  BoundReport out;
  out.n = profile.n;
  out.gamma = gamma;
  out.integral_term = numerics::integrate(integrand, {profile.A, profile.B}, tol);
  out.boundary_term = remainder_term(gamma, profile.A) * profile.edge_density;
  if (out.boundary_term < 0) {
    throw HypothesisViolation(gamma == 0.0 ? "G-Cond1-1" : (gamma > 0 ? "F-Cond1-1" : "W-Cond1-1"),
                              "negative boundary term");
  }
  out.total = out.integral_term + out.boundary_term;
  out.eta_bound = eta_boundary_bound(gamma, profile);
  out.reference_rate = 1.0 / profile.n;
  return out;
}

double profile_decomposition_bound(double gamma, const Differentiable& C,
                                   const DensityProfile& profile) {
  const double A = profile.A;
  if (gamma != 0.0) require_edge_sign(gamma, A);
  auto weight = [gamma](double x) {
    if (gamma == 0.0) return std::exp(-x);
    return std::pow(std::abs(x), -gamma - 1);
  };

  const auto grid = numerics::interior_grid(A, profile.B, 400);
  double sup = 0.0;
  for (double x : grid) {
    const double u = profile.u(x);
    const double c = C(x);
    if (u > 1e-300) {
      const double claimed = c * weight(x);
      if (!(std::abs(claimed - u) <= 1e-10 * u)) {
        std::ostringstream msg;
        msg << "u(" << x << ")=" << u << " but C*w=" << claimed;
        throw Error(ErrorKind::ProfileMismatch, msg.str());
      }
    }
    if (!(c > 0)) continue;
    const double ratio = C.slope(x, step_scale(x, A, profile.B)) / c;
    sup = std::max(sup, gamma == 0.0 ? std::abs(ratio) : std::abs(x * ratio));
  }

  const double c_edge =
      numerics::one_sided_limit(C.value, A, numerics::Side::FromAbove, edge_step(profile));
  if (gamma == 0.0) return sup + std::exp(-A) * -std::expm1(-std::abs(A)) * c_edge;
  const double edge = std::pow(std::abs(A), -gamma) * one_minus_min_power(A, std::abs(gamma)) * c_edge;
  return (sup + edge) / std::abs(gamma);
}

}  // namespace freeevt
