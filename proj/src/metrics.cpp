#include "freeevt/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "freeevt/error.hpp"

namespace freeevt {
namespace {

constexpr int kSeedsPerCdf = 512;
constexpr int kRefineRounds = 40;
constexpr int kRefineCandidates = 8;

void add_quantile_seeds(const Cdf& F, std::vector<double>& xs) {
  for (int k = 0; k < kSeedsPerCdf; ++k) {
    const double p = (k + 0.5) / kSeedsPerCdf;
    try {
      const double q = quantile(F, p);
      if (std::isfinite(q)) xs.push_back(q);
    } catch (const Error&) {
      // A law that never reaches p contributes no seed there.
    }
  }
}

void add_finite(double v, std::vector<double>& xs) {
  if (std::isfinite(v)) xs.push_back(v);
}

}  // namespace

double kolmogorov_distance(const Cdf& F, const Cdf& G, const numerics::Tolerance& tol) {
  auto gap = [&](double x) { return std::abs(eval_cdf(F, x) - eval_cdf(G, x)); };

  std::vector<double> jumps;
  for (double b : F.breakpoints) add_finite(b, jumps);
  for (double b : G.breakpoints) add_finite(b, jumps);
  for (double e : {F.support_lo, F.support_hi, G.support_lo, G.support_hi}) add_finite(e, jumps);

  std::vector<double> xs = jumps;
  add_quantile_seeds(F, xs);
  add_quantile_seeds(G, xs);
  if (xs.empty()) xs.push_back(0.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double best = 0.0;
  // Both one-sided values at every breakpoint.
  for (double j : jumps) {
    const double left = std::abs(std::clamp(F.left_limit(j), 0.0, 1.0) -
                                 std::clamp(G.left_limit(j), 0.0, 1.0));
    best = std::max(best, left);
  }

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = gap(xs[i]);
    best = std::max(best, v);
    scored.push_back({v, i});
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& l, const auto& r) { return l.first != r.first ? l.first > r.first : l.second < r.second; });

  // Golden-section shrinking between the neighbours of the strongest seeds.
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  const std::size_t top = std::min<std::size_t>(kRefineCandidates, scored.size());
  for (std::size_t c = 0; c < top; ++c) {
    const std::size_t i = scored[c].second;
    const double x = xs[i];
    double lo = i > 0 ? xs[i - 1] : x - std::max(1.0, std::abs(x));
    double hi = i + 1 < xs.size() ? xs[i + 1] : x + std::max(1.0, std::abs(x));
    double m1 = hi - ratio * (hi - lo);
    double m2 = lo + ratio * (hi - lo);
    double f1 = gap(m1);
    double f2 = gap(m2);
    double local = std::max({scored[c].first, f1, f2});
    for (int round = 0; round < kRefineRounds; ++round) {
      if (f1 >= f2) {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - ratio * (hi - lo);
        f1 = gap(m1);
      } else {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + ratio * (hi - lo);
        f2 = gap(m2);
      }
      const double improved = std::max({local, f1, f2});
      const bool stalled = improved - local < tol.abs_tol && round >= 8;
      local = improved;
      if (stalled || !(hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::abs(x))) break;
    }
    best = std::max(best, local);
  }
  return std::clamp(best, 0.0, 1.0);
}

bool affine_invariance_check(const Cdf& F, const Cdf& G, double a, double b) {
  if (!(a > 0)) throw Error(ErrorKind::InvalidArgument, "affine_invariance_check needs a > 0");
  const NormingSequence s{a, b, 1};
  const double before = kolmogorov_distance(F, G);
  const double after = kolmogorov_distance(renormalize(F, s), renormalize(G, s));
  return std::abs(after - before) <= 1e-9;
}

std::vector<ConvergenceRow> convergence_table(double gamma, const FamilyBuilder& build,
                                              const std::vector<int>& n_values,
                                              const numerics::Tolerance& tol,
                                              std::optional<Cdf> first_law) {
  const Cdf target = free_law(gamma);
  std::vector<ConvergenceRow> rows(n_values.size());

  auto fill = [&](std::size_t i) {
    ConvergenceRow& row = rows[i];
    row.n = n_values[i];
    row.reference = row.n > 0 ? 1.0 / row.n : 0.0;
    try {
      if (row.n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
      if (row.n == 1) {
        row.stein_total = 1.0;
        row.dk = first_law ? kolmogorov_distance(*first_law, target, tol) : 1.0;
        return;
      }
      const WorkedFamily fam = build(row.n);
      const BoundReport rep = stein_bound(gamma, fam.profile, tol);
      row.stein_total = rep.total;
      row.integral_term = rep.integral_term;
      row.boundary_term = rep.boundary_term;
      row.dk = kolmogorov_distance(fam.cdf, target, tol);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), rows.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) fill(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) fill(i);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace freeevt
