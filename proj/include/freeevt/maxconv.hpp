#pragma once

// Free max-convolution algebra on distribution functions:
//   F [v] G    = max{F + G - 1, 0}
//   F^{[v] n}  = max{nF - (n - 1), 0}
// plus classical powers F^n, affine renormalization and norming sequences.
//
// Both free operations are evaluated on the survival scale,
// 1 - (F [v] G) = min{(1 - F) + (1 - G), 1}, which is algebraically the same
// but keeps the upper tail exact and makes power composition exact up to a
// single rounding.

#include "freeevt/distributions.hpp"

namespace freeevt {

struct NormingSequence {
  double a = 1.0;  // scale a_n > 0
  double b = 0.0;  // shift b_n
  int n = 1;
};

Cdf free_max_conv_pair(const Cdf& F, const Cdf& G);

// n >= 1; n == 1 returns F unchanged. Throws "invalid power" for n < 1.
Cdf free_max_power(const Cdf& F, int n);

Cdf classical_max_power(const Cdf& F, int n);

// x -> F(a x + b).
Cdf renormalize(const Cdf& F, const NormingSequence& s);

// (1, log n) for gamma == 0 and (n^{1/gamma}, 0) otherwise; only classical
// laws have known norming constants.
NormingSequence norming_constants(const ExtremeValueLaw& law, int n);

// inf{x : F(x) > 1 - 1/n}: the point below which the n-fold free max power
// vanishes.
double support_left_edge(const Cdf& F, int n);

}  // namespace freeevt
