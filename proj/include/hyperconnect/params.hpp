#pragma once

#include "hyperconnect/types.hpp"

namespace hyperconnect {

/// Parameter tuples of the hypergeometric equation: alpha (n entries),
/// beta (n-1 entries) and the derived beta_n with
/// alpha_1 + ... + alpha_n = beta_1 + ... + beta_n.
struct ParameterSet {
  CVec alpha;
  CVec beta;
  Complex beta_n;
  int n = 0;

  static ParameterSet create(CVec alpha, CVec beta);

  /// Throws AssumptionViolated unless no beta_i and no beta_i - beta_j
  /// (i != j, beta_n included) is within tol of an integer.
  void require_nonresonant(double tol = kIntegerTolerance) const;

  /// Smallest distance to an integer over all beta_i and differences.
  double nonresonance_margin() const;

  /// All n beta values including the derived one.
  CVec beta_full() const;

  /// Convergence exponent at x=1 for the series shifted by `shift`:
  /// s = -Re(beta_n) - shift. Positive s means the series converges.
  double unit_margin(std::int64_t shift) const {
    return -beta_n.real() - static_cast<double>(shift);
  }
};

/// The shifted tuples (alpha_i, beta_i): every alpha gains 1 - beta_i,
/// every beta gains 1 - beta_i except slot i which becomes 2 - beta_i.
/// The derived last parameter is unchanged. No assumption check.
ParameterSet shifted_raw(const ParameterSet& p, int i);

}  // namespace hyperconnect
