#include "freeevt/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "freeevt/error.hpp"

namespace freeevt::numerics {
namespace {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half) and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxPanels = 20000;

enum class Mapping { Finite, UpperInfinite, LowerInfinite };

// A piece of the integration range between two consecutive breakpoints.
// Infinite pieces live on r in (0, 1] with t = anchor +- (1 - r) / r, which
// is s/(1-s) with s = 1 - r; keeping r as the coordinate preserves full
// relative precision near the point at infinity.
struct Piece {
  Mapping mapping;
  double lo;
  double hi;
  double anchor;
};

double checked(double v, double t) {
  if (std::isnan(v) || std::isinf(v)) {
    throw Error(ErrorKind::DomainError,
                "integrand returned " + std::to_string(v) + " at t=" + std::to_string(t));
  }
  return v;
}

double eval_mapped(const RealFn& f, const Piece& piece, double r) {
  switch (piece.mapping) {
    case Mapping::Finite:
      return checked(f(r), r);
    case Mapping::UpperInfinite: {
      const double t = piece.anchor + (1.0 - r) / r;
      if (std::isinf(t)) return 0.0;
      return checked(f(t), t) / (r * r);
    }
    case Mapping::LowerInfinite: {
      const double t = piece.anchor - (1.0 - r) / r;
      if (std::isinf(t)) return 0.0;
      return checked(f(t), t) / (r * r);
    }
  }
  return 0.0;
}

struct Panel {
  int piece;
  double lo;
  double hi;
  double value;
  double error;
  double abs_value;
  int depth;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const RealFn& f, const Piece& piece, int index, double lo, double hi,
                    int depth) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = eval_mapped(f, piece, centre);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double abs_sum = kWgk[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double f1 = eval_mapped(f, piece, centre - dx);
    const double f2 = eval_mapped(f, piece, centre + dx);
    kronrod += kWgk[i] * (f1 + f2);
    abs_sum += kWgk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  Panel p{index, lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * half,
          depth};
  // Rounding floor: no rule pair can resolve below a few ulps of |f| mass.
  p.error = std::max(p.error, 50.0 * kEps * p.abs_value);
  return p;
}

std::vector<Piece> split_pieces(Interval iv, std::span<const double> breakpoints) {
  if (!(iv.lo < iv.hi)) {
    throw Error(ErrorKind::DomainError, "integration interval requires lo < hi");
  }
  if (std::isinf(iv.lo) && std::isinf(iv.hi)) {
    throw Error(ErrorKind::DomainError, "at most one infinite endpoint per integration call");
  }
  std::vector<double> cuts{iv.lo};
  std::vector<double> inner;
  for (double b : breakpoints) {
    if (std::isfinite(b) && b > iv.lo && b < iv.hi) inner.push_back(b);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(iv.hi);

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (std::isinf(b)) {
      pieces.push_back({Mapping::UpperInfinite, 0.0, 1.0, a});
    } else if (std::isinf(a)) {
      pieces.push_back({Mapping::LowerInfinite, 0.0, 1.0, b});
    } else {
      pieces.push_back({Mapping::Finite, a, b, 0.0});
    }
  }
  return pieces;
}

}  // namespace

QuadratureResult integrate_detailed(const RealFn& f, Interval iv, const Tolerance& tol,
                                    std::span<const double> breakpoints) {
  if (tol.abs_tol < 0 || tol.rel_tol < 0 || tol.abs_tol + tol.rel_tol <= 0 ||
      tol.max_refinements <= 0) {
    throw Error(ErrorKind::InvalidArgument, "tolerance must satisfy abs_tol + rel_tol > 0");
  }
  const auto pieces = split_pieces(iv, breakpoints);

  std::priority_queue<Panel> active;
  std::vector<Panel> settled;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Panel p = gauss_kronrod(f, pieces[i], static_cast<int>(i), pieces[i].lo, pieces[i].hi, 0);
    total += p.value;
    total_err += p.error;
    active.push(p);
  }

  int panels = static_cast<int>(pieces.size());
  auto target = [&] { return std::max(tol.abs_tol, tol.rel_tol * std::abs(total)); };

  while (total_err > target()) {
    if (active.empty() || panels >= kMaxPanels) {
      throw QuadratureFailure("tolerance not reached (estimate " + std::to_string(total) +
                                  ", error " + std::to_string(total_err) + ")",
                              total, total_err);
    }
    Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (worst.depth >= tol.max_refinements || !(mid > worst.lo && mid < worst.hi)) {
      settled.push_back(worst);
      continue;
    }
    const Piece& piece = pieces[static_cast<std::size_t>(worst.piece)];
    Panel left = gauss_kronrod(f, piece, worst.piece, worst.lo, mid, worst.depth + 1);
    Panel right = gauss_kronrod(f, piece, worst.piece, mid, worst.hi, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++panels;
  }

  // Re-sum to shed accumulated cancellation from the running updates.
  double value = 0.0;
  double error = 0.0;
  for (const auto& p : settled) {
    value += p.value;
    error += p.error;
  }
  while (!active.empty()) {
    value += active.top().value;
    error += active.top().error;
    active.pop();
  }
  return {value, error, panels};
}

double integrate(const RealFn& f, Interval iv, const Tolerance& tol,
                 std::span<const double> breakpoints) {
  return integrate_detailed(f, iv, tol, breakpoints).value;
}

double find_root(const RealFn& g, Interval bracket, const Tolerance& tol) {
  if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi) || !(bracket.lo < bracket.hi)) {
    throw Error(ErrorKind::NoSignChange, "root bracket must be finite with lo < hi");
  }
  auto safe = [&](double x) {
    const double v = g(x);
    if (std::isnan(v)) {
      throw Error(ErrorKind::DomainError, "function returned NaN at x=" + std::to_string(x));
    }
    return v;
  };
  double lo = bracket.lo;
  double hi = bracket.hi;
  const double flo = safe(lo);
  const double fhi = safe(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0)) {
    throw Error(ErrorKind::NoSignChange, "g(lo) and g(hi) have the same sign");
  }

  auto narrow_enough = [&](double a, double b) {
    const double ulps = 4.0 * kEps * std::max(std::abs(a), std::abs(b));
    return std::abs(b - a) <= std::max(tol.abs_tol, ulps);
  };
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve(safe, lo, hi, flo, fhi, narrow_enough, max_iter);
  double fa = safe(a);
  double fb = safe(b);
  // Finish by bisection in the rare case the solver ran out of iterations.
  while (!narrow_enough(a, b)) {
    const double m = 0.5 * (a + b);
    const double fm = safe(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

double differentiate(const RealFn& f, double x, double scale) {
  if (!(scale > 0) || !std::isfinite(x)) {
    throw Error(ErrorKind::InvalidArgument, "differentiate needs finite x and scale > 0");
  }
  constexpr int kLevels = 10;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  auto safe = [&](double t) {
    const double v = f(t);
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::DomainError, "non-finite value near x=" + std::to_string(x));
    }
    return v;
  };

  std::array<std::array<double, kLevels>, kLevels> table{};
  double h = 0.1 * scale;
  table[0][0] = (safe(x + h) - safe(x - h)) / (2.0 * h);
  double best = table[0][0];
  double best_err = std::numeric_limits<double>::max();
  for (int i = 1; i < kLevels; ++i) {
    h /= kShrink;
    table[0][i] = (safe(x + h) - safe(x - h)) / (2.0 * h);
    double factor = kShrink2;
    for (int j = 1; j <= i; ++j) {
      table[j][i] = (table[j - 1][i] * factor - table[j - 1][i - 1]) / (factor - 1.0);
      factor *= kShrink2;
      const double err = std::max(std::abs(table[j][i] - table[j - 1][i]),
                                  std::abs(table[j][i] - table[j - 1][i - 1]));
      if (err <= best_err) {
        best_err = err;
        best = table[j][i];
      }
    }
    // Higher order is no longer helping: round-off has taken over.
    if (std::abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * best_err) break;
  }
  return best;
}

double one_sided_limit(const RealFn& f, double a, Side side, double initial_step) {
  const double h0 = initial_step > 0 ? initial_step : 1e-3 * std::max(1.0, std::abs(a));
  const double dir = side == Side::FromAbove ? 1.0 : -1.0;
  auto sample = [&](double h) {
    const double v = f(a + dir * h);
    if (std::isnan(v)) {
      throw Error(ErrorKind::DomainError, "NaN while approaching " + std::to_string(a));
    }
    return v;
  };

  // Richardson: assume f(a + h) = L + c1 h + c2 h^2 + ...
  constexpr int kLevels = 16;
  std::vector<std::vector<double>> table(kLevels);
  double best = 0.0;
  double best_err = kInf;
  for (int k = 0; k < kLevels; ++k) {
    table[k].resize(static_cast<std::size_t>(k) + 1);
    table[k][0] = sample(h0 * std::ldexp(1.0, -k));
    double factor = 2.0;
    for (int j = 1; j <= k; ++j) {
      table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0);
      factor *= 2.0;
    }
    if (k >= 2) {
      const double err = std::max(std::abs(table[k][k] - table[k][k - 1]),
                                  std::abs(table[k][k] - table[k - 1][k - 1]));
      if (std::isfinite(table[k][k]) && err < best_err) {
        best_err = err;
        best = table[k][k];
      }
      if (best_err <= 1e-13 * std::max(1.0, std::abs(best))) return best;
    }
  }
  if (best_err <= 1e-8 * std::max(1.0, std::abs(best))) return best;

  // Non-analytic approach (e.g. sqrt-type): accelerate the raw sequence with
  // iterated Aitken sweeps, which only needs geometric convergence.
  std::vector<double> seq;
  for (int k = 0; k < 48; ++k) seq.push_back(sample(h0 * std::ldexp(1.0, -k)));
  const double raw_scale = std::max(1.0, std::abs(seq.back()));
  for (int sweep = 0; sweep < 3 && seq.size() >= 3; ++sweep) {
    std::vector<double> next;
    for (std::size_t i = 0; i + 2 < seq.size(); ++i) {
      const double d1 = seq[i + 1] - seq[i];
      const double d2 = seq[i + 2] - 2.0 * seq[i + 1] + seq[i];
      next.push_back(d2 == 0.0 ? seq[i + 2] : seq[i + 2] - d1 * d1 / d2);
      if (!std::isfinite(next.back())) next.back() = seq[i + 2];
    }
    seq = std::move(next);
  }
  const std::size_t m = seq.size();
  if (m >= 3) {
    const double spread = std::max(std::abs(seq[m - 1] - seq[m - 2]), std::abs(seq[m - 2] - seq[m - 3]));
    if (spread <= 1e-8 * raw_scale) return seq[m - 1];
  }
  throw Error(ErrorKind::LimitNotDetected, "no convergent limit at " + std::to_string(a));
}

std::vector<double> interior_grid(double lo, double hi, int count) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "interior_grid requires lo < hi");
  std::vector<double> pts;
  auto push = [&](double t) {
    if (std::isfinite(t) && t > lo && t < hi) pts.push_back(t);
  };
  if (std::isfinite(lo) && std::isfinite(hi)) {
    const double w = hi - lo;
    for (int i = 1; i < count; ++i) push(lo + w * i / count);
    for (int k = 3; k <= 40; ++k) {
      push(lo + w * std::ldexp(1.0, -k));
      push(hi - w * std::ldexp(1.0, -k));
    }
  } else {
    const bool upper = std::isinf(hi);
    const double anchor = upper ? lo : hi;
    if (std::isinf(anchor)) {
      // Whole line: split at zero.
      auto left = interior_grid(-kInf, 0.0, count / 2);
      auto right = interior_grid(0.0, kInf, count / 2);
      pts = std::move(left);
      pts.push_back(0.0);
      pts.insert(pts.end(), right.begin(), right.end());
      return pts;
    }
    const double dir = upper ? 1.0 : -1.0;
    for (int i = 1; i < count; ++i) {
      const double r = static_cast<double>(i) / count;
      push(anchor + dir * (1.0 - r) / r);
    }
    for (int k = 3; k <= 40; ++k) {
      push(anchor + dir * std::ldexp(1.0, -k));  // towards the finite edge
      push(anchor + dir * std::ldexp(1.0, k));   // towards infinity
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace freeevt::numerics
