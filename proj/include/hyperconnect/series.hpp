#pragma once

#include <cstdint>
#include <mutex>

#include "hyperconnect/params.hpp"
#include "hyperconnect/types.hpp"

namespace hyperconnect {

/// A series evaluation together with a tail-error estimate.
struct SeriesValue {
  Complex value{0.0, 0.0};
  double tail_bound = 0.0;
  std::int64_t terms_used = 1;
  /// Set when the unit-argument convergence margin is below 0.1; the
  /// value is still returned with an enlarged tail bound.
  bool slow = false;
};

struct SeriesOptions {
  double tol = 1e-12;
  std::int64_t max_terms_disk = 10'000;
  std::int64_t max_terms_unit = 1'000'000;
  double slow_margin = 0.1;
};

/// Cached Taylor coefficients a_m = (alpha)_m / ((beta)_m m!) of the
/// series at the origin. Append-only cache, safe for concurrent readers.
class CoefficientStream {
 public:
  explicit CoefficientStream(ParameterSet params);

  Complex coeff(std::int64_t m) const;
  const ParameterSet& params() const { return params_; }

 private:
  ParameterSet params_;
  mutable std::mutex mu_;
  mutable CVec cache_;
};

/// nFn-1 with every parameter raised by `shift`, evaluated at |x| < 1.
SeriesValue evaluate_nFn1(const ParameterSet& p, std::int64_t shift, Complex x,
                          const SeriesOptions& opt = {});

/// nFn-1 with every parameter raised by `shift`, evaluated at x = 1.
/// Requires convergence margin s = -Re(beta_n) - shift > 0; the tail
/// bound uses the Raabe model |term_M| * M / s.
SeriesValue evaluate_at_one(const ParameterSet& p, std::int64_t shift,
                            const SeriesOptions& opt = {});

/// Falling factorial [h]_j = h(h-1)...(h-j+1); exact, [h]_0 = 1,
/// zero when j > h.
std::int64_t falling_factorial(std::int64_t h, std::int64_t j);

/// Weighted partial sum  sum_{h=0}^{m} [h]_{i-1} a_h, 1 <= i <= n-1.
Complex weighted_partial_sum(const CoefficientStream& stream, int i,
                             std::int64_t m);

}  // namespace hyperconnect
