#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "cshmm/enclosure.hpp"

namespace cshmm {

// Kahan-compensated accumulator for long positive sums.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double lg(double x) { return std::log2(x); }

// Binary entropy in bits.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// -x*lg(x), continuously extended by 0 at x = 0.
inline double xlgx_neg(double x) { return x <= 0.0 ? 0.0 : -x * std::log2(x); }

// Bracket of sum_{k=first}^{infinity} f(k) for f positive, continuous and
// nonincreasing on [mono_from, inf). Terms k < max(mono_from, explicit_to+1)
// are summed explicitly; the remainder from n = explicit_to+1 is enclosed by
//   integral(n) <= sum_{k>=n} f(k) <= f(n) + integral(n),
// where `tail_integral(n)` returns the exact value of the improper integral
// of f from n to infinity. The result is widened by a small multiple of the
// accumulated magnitude to absorb rounding in the explicit part.
inline Enclosure bracketed_series(std::int64_t first, std::int64_t explicit_to,
                                  std::int64_t mono_from,
                                  const std::function<double(double)>& f,
                                  const std::function<double(double)>& tail_integral) {
  if (explicit_to + 1 < mono_from) explicit_to = mono_from - 1;
  KahanSum partial;
  std::int64_t terms = 0;
  for (std::int64_t k = first; k <= explicit_to; ++k) {
    partial.add(f(static_cast<double>(k)));
    ++terms;
  }
  double n = static_cast<double>(explicit_to + 1);
  double integral = tail_integral(n);
  double cap = f(n);
  double p = partial.value();
  // Kahan keeps the accumulated error near 2 eps * sum(|terms|) independent
  // of the term count (up to ~1e12 terms); widen generously beyond that.
  double slack = (32.0 + 1e-12 * static_cast<double>(terms)) *
                 std::numeric_limits<double>::epsilon() * (p + integral + cap);
  return Enclosure(p + integral - slack, p + integral + cap + slack);
}

// Bracket of sum_{i=n}^{infinity} 1/i^2 for n >= 1, via the telescoping
// comparisons 1/(i(i+1)) < 1/i^2 < 1/((i-1)i). The full sum is zeta(2).
inline Enclosure zeta2_tail(std::int64_t n) {
  if (n <= 1) return Enclosure(1.0, 1.6449340668482275);
  double d = static_cast<double>(n);
  return Enclosure(1.0 / d, 1.0 / (d - 1.0));
}

}  // namespace cshmm
