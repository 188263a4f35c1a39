#pragma once

#include <array>
#include <utility>

#include "hyperconnect/params.hpp"
#include "hyperconnect/series.hpp"
#include "hyperconnect/types.hpp"

namespace hyperconnect {

/// The differential operator  delta * prod(delta + c_i) - x * prod(delta + a_i)
/// with delta = x d/dx, in factored form. left_offsets holds the c_i of the
/// first product (0, beta_1 - 1, ..., beta_{n-1} - 1), right_offsets the
/// alpha_i of the x-multiplied product.
struct DeltaOperator {
  CVec left_offsets;
  CVec right_offsets;

  static DeltaOperator from_params(const ParameterSet& p);
  int rank() const { return static_cast<int>(right_offsets.size()); }
};

/// delta acting on t^s with t = 1 - x:  delta t^s = s t^s - s t^{s-1}.
/// Returned as two (power, coefficient) contributions.
std::array<std::pair<Complex, Complex>, 2> apply_delta_monomial(Complex s);

/// Coefficients of L t^s collected by power offset: entry [k] multiplies
/// t^{s + k - n}, k = 0..n+1. Entry [0] (power t^{s-n}) cancels
/// identically between the two operator products.
CVec operator_band_at_one(const DeltaOperator& op, Complex s);

/// Coefficient recurrence for the series ansatz sum_m d_m t^{rho+m}.
/// stencil(m) returns W_0..W_q (q = min(m, n)) with
/// sum_k W_k d_{m-k} = 0; W_0 is the indicial factor at rho + m.
class RecurrenceAtOne {
 public:
  RecurrenceAtOne(DeltaOperator op, Complex rho)
      : op_(std::move(op)), rho_(rho) {}

  CVec stencil(std::int64_t m) const;
  Complex indicial_factor(Complex s) const;
  Complex rho() const { return rho_; }

 private:
  DeltaOperator op_;
  Complex rho_;
};

/// Indicial polynomial at the given singular point (0 or 1), ascending
/// coefficients, degree n. Roots at 0: {0, 1-beta_i}; at 1:
/// {0, 1, ..., n-2, -beta_n}.
CVec indicial_polynomial(const DeltaOperator& op, int point);

/// Roots of the indicial polynomial, computed from the polynomial via
/// companion-matrix eigenvalues.
CVec indicial_roots(const DeltaOperator& op, int point);

/// One truncated Frobenius solution.
struct LocalSolution {
  int expansion_point = 0;  // 0 or 1
  Complex exponent{0.0, 0.0};
  CVec coeffs;  // d_0 .. d_M
  int truncation_order = 0;
  int label = 0;  // 1-based index in the fundamental system
};

/// Normalization of the basis at x=1. Canonical sets d_0 = 1 and the
/// remaining free coefficients d_1..d_{n-1-i} of solution i to zero,
/// which makes the D matrix the identity. A custom table lists, for each
/// solution i <= n-1, its n-i free coefficients (d_0 nonzero), and a
/// single leading coefficient for solution n.
struct Normalization {
  bool canonical = true;
  std::vector<CVec> table;

  static Normalization canonical_for(int n);
  static Normalization custom(std::vector<CVec> table);
  /// Free coefficient d_j of solution i (1-based), resolving canonical.
  Complex free_coeff(int n, int i, int j) const;
};

/// The n solutions at x=0 with exponents {0, 1-beta_1, ..., 1-beta_{n-1}}.
std::vector<LocalSolution> local_basis_at_zero(const ParameterSet& p, int M);

/// The n solutions at x=1 with exponents {0, 1, ..., n-2, -beta_n},
/// coefficients from the recurrence with free slots fixed by the
/// normalization; resonant consistency is asserted.
std::vector<LocalSolution> local_basis_at_one(
    const ParameterSet& p, int M, const Normalization& norm = Normalization{});

/// Evaluate the truncated solution at x (principal branches; the local
/// variable is x or 1-x). Geometric tail estimate from the last terms.
SeriesValue evaluate_local(const LocalSolution& sol, Complex x);

}  // namespace hyperconnect
