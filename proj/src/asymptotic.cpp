#include "hyperconnect/asymptotic.hpp"

#include <cmath>
#include <limits>

#include "hyperconnect/complexfn.hpp"

namespace hyperconnect {

namespace {

std::int64_t rising_i64(std::int64_t a, std::int64_t k) {
  std::int64_t p = 1;
  for (std::int64_t t = 0; t < k; ++t) p *= a + t;
  return p;
}

std::int64_t binom_i64(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

// Empirical decay exponent from the m, m/2, m/4 successive differences:
// for e(m) = L + C m^p the difference ratio is 2^p.
double difference_rate(Complex em, Complex em2, Complex em4) {
  const double d1 = std::abs(em - em2);
  const double d2 = std::abs(em2 - em4);
  if (d1 <= 0.0 || d2 <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(d1 / d2);
}

Complex cn_main_term(const ParameterSet& p, const CoefficientStream& stream,
                     std::int64_t m) {
  return gamma(p.beta_n) * stirling_ratio(m, p.beta_n) * stream.coeff(m);
}

Complex step2_main_term(const CoefficientStream& stream, int i,
                        std::int64_t m) {
  double pref = (i - 1) % 2 == 0 ? 1.0 : -1.0;
  for (int t = 2; t <= i - 1; ++t) pref /= t;
  return pref * weighted_partial_sum(stream, i, m);
}

}  // namespace

Complex schafke_schmidt_term(std::int64_t m, Complex alpha, const CVec& exps,
                             const std::vector<CVec>& d, const CVec& c, int k) {
  if (exps.size() != d.size() || exps.size() != c.size()) {
    throw Error("schafke_schmidt_term: mismatched exponent/d/c sizes");
  }
  Complex total(0.0);
  const Complex ma = alpha + static_cast<double>(m);
  for (std::size_t j = 0; j < exps.size(); ++j) {
    const Complex rg = reciprocal_gamma(-exps[j]);
    if (rg == Complex(0.0)) continue;  // holomorphic-family exponent
    Complex inner(0.0);
    Complex prod(1.0);
    for (int ell = 0; ell <= k; ++ell) {
      if (ell > 0) {
        const Complex den = ma - static_cast<double>(ell) - exps[j];
        if (std::abs(den) < 1e-9) {
          throw DenominatorHit("schafke_schmidt_term: m+alpha-s-alpha_j ~ 0");
        }
        prod *= (-static_cast<double>(ell) - exps[j]) / den;
      }
      if (ell < static_cast<int>(d[j].size())) {
        inner += prod * d[j][static_cast<std::size_t>(ell)];
      }
    }
    const Complex ratio = std::exp(log_gamma(ma - exps[j]) - log_gamma(ma + 1.0));
    total += ratio * inner * c[j] * rg;
  }
  return total;
}

AsymptoticEstimate estimate_cn(const ParameterSet& p,
                               const std::vector<LocalSolution>& basis1,
                               const CoefficientStream& stream, std::int64_t m) {
  if (m < 16) throw Error("estimate_cn: m must be at least 16");
  (void)basis1;  // the estimate targets d_0^(n) c_n itself
  AsymptoticEstimate est;
  est.target = "d0n_cn";
  est.m_used = m;
  est.k_used = 0;
  est.predicted_rate = -1.0;
  est.value = cn_main_term(p, stream, m);
  est.rate_exponent = difference_rate(est.value, cn_main_term(p, stream, m / 2),
                                      cn_main_term(p, stream, m / 4));
  return est;
}

AsymptoticEstimate estimate_step2(const ParameterSet& p,
                                  const std::vector<LocalSolution>& basis1,
                                  const CoefficientStream& stream, int i,
                                  std::int64_t m) {
  if (i < 1 || i > p.n - 1) {
    throw Error("estimate_step2: index i must lie in [1, n-1]");
  }
  if (p.unit_margin(i - 1) <= 0.0) {
    throw DivergentAtOne("estimate_step2: Re beta_n + i - 1 must be negative");
  }
  (void)basis1;
  AsymptoticEstimate est;
  est.target = "sum_d_c_" + std::to_string(i);
  est.m_used = m;
  est.k_used = 0;
  est.predicted_rate = p.beta_n.real() + static_cast<double>(i - 1);
  est.value = step2_main_term(stream, i, m);
  est.rate_exponent = difference_rate(est.value,
                                      step2_main_term(stream, i, m / 2),
                                      step2_main_term(stream, i, m / 4));
  return est;
}

CVec recover_first_column(const ParameterSet& p,
                          const std::vector<LocalSolution>& basis1,
                          const CoefficientStream& stream, std::int64_t m) {
  const int n = p.n;
  CVec c(static_cast<std::size_t>(n));
  // Triangular solve of sum_{j<=i} d_{i-j}^(j) c_j = S_i over i = 1..n-1.
  for (int i = 1; i <= n - 1; ++i) {
    Complex acc = estimate_step2(p, basis1, stream, i, m).value;
    for (int j = 1; j < i; ++j) {
      acc -= basis1[static_cast<std::size_t>(j - 1)]
                 .coeffs[static_cast<std::size_t>(i - j)] *
             c[static_cast<std::size_t>(j - 1)];
    }
    c[static_cast<std::size_t>(i - 1)] =
        acc / basis1[static_cast<std::size_t>(i - 1)].coeffs[0];
  }
  c[static_cast<std::size_t>(n - 1)] =
      estimate_cn(p, basis1, stream, m).value / basis1.back().coeffs[0];
  return c;
}

bool lemma_identity_check(std::int64_t m, std::int64_t h, std::int64_t ell) {
  const std::int64_t lhs = rising_i64(m - h + 1, ell);
  std::int64_t rhs = 0;
  for (std::int64_t p = 0; p <= ell; ++p) {
    const std::int64_t sign = ((ell - p) % 2 == 0) ? 1 : -1;
    rhs += sign * binom_i64(ell, p) * falling_factorial(h, ell - p) *
           rising_i64(m + 1, p);
  }
  return lhs == rhs;
}

double fit_rate(const std::vector<double>& ms, const std::vector<double>& errs) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ms.size() && i < errs.size(); ++i) {
    if (ms[i] > 0.0 && errs[i] > 0.0) {
      xs.push_back(std::log(ms[i]));
      ys.push_back(std::log(errs[i]));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hyperconnect
