#pragma once

// Kolmogorov distance and convergence tables that set measured distances
// against the Stein bound.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "freeevt/distributions.hpp"
#include "freeevt/families.hpp"

namespace freeevt {

/// sup_x |F(x) - G(x)|, approximated from below. Candidates are the union of
/// both breakpoint sets (both one-sided values at each), 512 quantile seeds
/// per distribution and the support edges; the best few candidates are then
/// refined by golden-section shrinking for up to 40 rounds or until the gain
/// drops below tol.abs_tol.
double kolmogorov_distance(const Cdf& F, const Cdf& G, const numerics::Tolerance& tol = {});

/// |d_K(F(a.+b), G(a.+b)) - d_K(F, G)| <= 1e-9. Requires a > 0.
bool affine_invariance_check(const Cdf& F, const Cdf& G, double a, double b);

struct ConvergenceRow {
  int n = 0;
  double dk = 0.0;
  double stein_total = 0.0;
  std::optional<double> integral_term;  // empty for n == 1
  std::optional<double> boundary_term;
  double reference = 0.0;               // 1/n
  std::optional<std::string> error;     // set when the row failed
};

using FamilyBuilder = std::function<WorkedFamily(int n)>;

/// One row per n. n == 1 reports the trivial bound 1 and no decomposition;
/// the measured distance then uses the un-normed sample law when
/// `first_law` is given, otherwise it is left at 1. Rows are computed on
/// worker threads; a throwing row is marked failed.
std::vector<ConvergenceRow> convergence_table(double gamma, const FamilyBuilder& build,
                                              const std::vector<int>& n_values,
                                              const numerics::Tolerance& tol = {},
                                              std::optional<Cdf> first_law = std::nullopt);

}  // namespace freeevt
