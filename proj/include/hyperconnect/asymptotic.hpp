#pragma once

#include <string>

#include "hyperconnect/frobenius.hpp"
#include "hyperconnect/params.hpp"
#include "hyperconnect/series.hpp"
#include "hyperconnect/types.hpp"

namespace hyperconnect {

/// One coefficient-asymptotics estimate, with an empirical convergence
/// rate measured from the m/4, m/2, m successive differences.
struct AsymptoticEstimate {
  std::string target;
  Complex value{0.0, 0.0};
  std::int64_t m_used = 0;
  int k_used = 0;
  double rate_exponent = 0.0;  // NaN when not measurable
  double predicted_rate = 0.0;
};

/// Main term of the coefficient asymptotics: with y^[0] = x^alpha sum a_m x^m
/// and basis exponents exps[j] at 1 whose solutions carry coefficient
/// tables d[j] and connection coefficients c[j],
///   a_m ~ sum_j Gamma(m+alpha-exps_j)/Gamma(m+alpha+1)
///         * { sum_{l=0}^{k} (prod_{s=1}^{l} (-s-exps_j)/(m+alpha-s-exps_j)) d[j][l] }
///         * c_j / Gamma(-exps_j).
/// Exponents with non-negative integer -exps_j contribute exactly zero.
Complex schafke_schmidt_term(std::int64_t m, Complex alpha, const CVec& exps,
                             const std::vector<CVec>& d, const CVec& c, int k);

/// Step-1 extractor:  d_0^(n) c_n ~ Gamma(beta_n) Gamma(m+1)/Gamma(m+beta_n) a_m,
/// error O(1/m). Requires m >= 16.
AsymptoticEstimate estimate_cn(const ParameterSet& p,
                               const std::vector<LocalSolution>& basis1,
                               const CoefficientStream& stream, std::int64_t m);

/// Step-2 extractor:  sum_{j<=i} d_{i-j}^(j) c_j ~
/// (-1)^(i-1)/(i-1)! sum_{h<=m} [h]_{i-1} a_h, error O(m^{Re beta_n + i - 1}).
AsymptoticEstimate estimate_step2(const ParameterSet& p,
                                  const std::vector<LocalSolution>& basis1,
                                  const CoefficientStream& stream, int i,
                                  std::int64_t m);

/// Recover all n connection coefficients of y_1^[0] from the extractors
/// at truncation m: triangular solve of the step-2 estimates for
/// c_1..c_{n-1}, step-1 for c_n.
CVec recover_first_column(const ParameterSet& p,
                          const std::vector<LocalSolution>& basis1,
                          const CoefficientStream& stream, std::int64_t m);

/// Exact-integer check of the identity
/// (m-h+1)_l = sum_{p=0}^{l} (-1)^(l-p) binom(l,p) [h]_{l-p} (m+1)_p.
bool lemma_identity_check(std::int64_t m, std::int64_t h, std::int64_t ell);

/// Least-squares slope of log(err) against log(m). NaN when fewer than
/// two positive samples.
double fit_rate(const std::vector<double>& ms, const std::vector<double>& errs);

}  // namespace hyperconnect
