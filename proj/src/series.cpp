#include "hyperconnect/series.hpp"

#include <cmath>

#include "hyperconnect/complexfn.hpp"

namespace hyperconnect {

namespace {

// Compensated (Kahan) accumulator; long unit-argument sums would
// otherwise accumulate O(m * eps) rounding.
struct KahanSum {
  Complex sum{0.0, 0.0};
  Complex carry{0.0, 0.0};

  void add(Complex x) {
    const Complex y = x - carry;
    const Complex t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// One-term ratio t_{m+1}/t_m of the shifted hypergeometric series
// (without the x factor).
Complex term_ratio(const ParameterSet& p, double shift, std::int64_t m) {
  const double dm = static_cast<double>(m);
  Complex num(1.0, 0.0);
  for (const Complex& a : p.alpha) num *= a + (shift + dm);
  Complex den(dm + 1.0, 0.0);
  for (const Complex& b : p.beta) den *= b + (shift + dm);
  return num / den;
}

void check_denominators(const ParameterSet& p, std::int64_t shift) {
  for (std::size_t j = 0; j < p.beta.size(); ++j) {
    if (near_nonpositive_integer(p.beta[j] + static_cast<double>(shift))) {
      throw PoleError("denominator parameter beta_" + std::to_string(j + 1) +
                      " + shift is a non-positive integer");
    }
  }
}

}  // namespace

CoefficientStream::CoefficientStream(ParameterSet params)
    : params_(std::move(params)) {
  check_denominators(params_, 0);
  cache_.push_back(Complex(1.0, 0.0));
}

Complex CoefficientStream::coeff(std::int64_t m) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (static_cast<std::int64_t>(cache_.size()) <= m) {
    const std::int64_t k = static_cast<std::int64_t>(cache_.size()) - 1;
    cache_.push_back(cache_.back() * term_ratio(params_, 0.0, k));
  }
  return cache_[static_cast<std::size_t>(m)];
}

SeriesValue evaluate_nFn1(const ParameterSet& p, std::int64_t shift, Complex x,
                          const SeriesOptions& opt) {
  check_denominators(p, shift);
  const double ax = std::abs(x);
  if (ax >= 1.0) {
    throw OutOfDomain("evaluate_nFn1: |x| must be < 1");
  }
  const double sh = static_cast<double>(shift);

  KahanSum acc;
  Complex term(1.0, 0.0);
  acc.add(term);
  if (x == Complex(0.0, 0.0)) {
    return SeriesValue{acc.sum, 0.0, 1, false};
  }

  double prev_mag = 1.0;
  for (std::int64_t m = 0; m < opt.max_terms_disk; ++m) {
    term *= term_ratio(p, sh, m) * x;
    acc.add(term);
    const double mag = std::abs(term);
    if (m >= 8) {
      double r = ax;
      if (prev_mag > 0.0) r = std::max(r, mag / prev_mag);
      r = std::min(r, 0.995);
      const double tail = mag * r / (1.0 - r);
      const double scale = std::abs(acc.sum);
      if (mag <= opt.tol * scale && tail <= opt.tol * scale) {
        return SeriesValue{acc.sum, tail, m + 2, false};
      }
    }
    prev_mag = mag;
  }
  // A terminating series ends up here with exact zeros; that is fine.
  if (std::abs(term) == 0.0) {
    return SeriesValue{acc.sum, 0.0, opt.max_terms_disk, false};
  }
  throw NoConvergence("evaluate_nFn1: term cap " +
                      std::to_string(opt.max_terms_disk) +
                      " reached before the tolerance");
}

SeriesValue evaluate_at_one(const ParameterSet& p, std::int64_t shift,
                            const SeriesOptions& opt) {
  check_denominators(p, shift);
  const double s = p.unit_margin(shift);
  if (s <= 0.0) {
    throw DivergentAtOne(
        "evaluate_at_one: convergence margin -Re(beta_n) - shift = " +
        std::to_string(s) + " is not positive");
  }
  const bool slow = s < opt.slow_margin;
  const double sh = static_cast<double>(shift);

  KahanSum acc;
  Complex term(1.0, 0.0);
  acc.add(term);

  double tail = 0.0;
  std::int64_t used = 1;
  for (std::int64_t m = 0; m < opt.max_terms_unit; ++m) {
    term *= term_ratio(p, sh, m);
    acc.add(term);
    used = m + 2;
    const double mag = std::abs(term);
    // Raabe model |t_M| M / s with a finite-M transient allowance.
    const double idx = static_cast<double>(m + 1);
    tail = mag * idx / s * (1.0 + (2.0 * s + 6.0) / idx);
    if (m >= 16) {
      const double scale = std::abs(acc.sum);
      if (mag <= opt.tol * scale && tail <= opt.tol * scale) break;
    }
    if (mag == 0.0) {  // terminating series
      tail = 0.0;
      break;
    }
  }
  if (slow) tail *= 3.0;
  return SeriesValue{acc.sum, tail, used, slow};
}

std::int64_t falling_factorial(std::int64_t h, std::int64_t j) {
  std::int64_t p = 1;
  for (std::int64_t k = 0; k < j; ++k) {
    p *= h - k;
    if (p == 0) return 0;
  }
  return p;
}

Complex weighted_partial_sum(const CoefficientStream& stream, int i,
                             std::int64_t m) {
  const int n = stream.params().n;
  if (i < 1 || i > n - 1) {
    throw Error("weighted_partial_sum: index i must lie in [1, n-1]");
  }
  KahanSum acc;
  for (std::int64_t h = 0; h <= m; ++h) {
    const std::int64_t w = falling_factorial(h, i - 1);
    if (w != 0) acc.add(static_cast<double>(w) * stream.coeff(h));
  }
  return acc.sum;
}

}  // namespace hyperconnect
