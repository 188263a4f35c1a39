#include "hyperconnect/params.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "hyperconnect/complexfn.hpp"

namespace hyperconnect {

ParameterSet ParameterSet::create(CVec alpha, CVec beta) {
  if (alpha.size() < 2 || beta.size() + 1 != alpha.size()) {
    throw Error("ParameterSet: need n >= 2 alphas and n-1 betas");
  }
  ParameterSet p;
  p.n = static_cast<int>(alpha.size());
  p.alpha = std::move(alpha);
  p.beta = std::move(beta);
  const Complex sa = std::accumulate(p.alpha.begin(), p.alpha.end(), Complex(0.0));
  const Complex sb = std::accumulate(p.beta.begin(), p.beta.end(), Complex(0.0));
  p.beta_n = sa - sb;
  return p;
}

CVec ParameterSet::beta_full() const {
  CVec b = beta;
  b.push_back(beta_n);
  return b;
}

double ParameterSet::nonresonance_margin() const {
  const CVec b = beta_full();
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i) {
    margin = std::min(margin, integer_distance(b[i]));
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      margin = std::min(margin, integer_distance(b[i] - b[j]));
    }
  }
  return margin;
}

void ParameterSet::require_nonresonant(double tol) const {
  const CVec b = beta_full();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (integer_distance(b[i]) < tol) {
      throw AssumptionViolated("beta_" + std::to_string(i + 1) +
                               " is within tolerance of an integer");
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (i != j && integer_distance(b[i] - b[j]) < tol) {
        throw AssumptionViolated("beta_" + std::to_string(i + 1) + " - beta_" +
                                 std::to_string(j + 1) +
                                 " is within tolerance of an integer");
      }
    }
  }
}

ParameterSet shifted_raw(const ParameterSet& p, int i) {
  if (i < 1 || i > p.n - 1) {
    throw Error("shifted_raw: shift index out of range");
  }
  const Complex s = 1.0 - p.beta[i - 1];
  CVec a(p.alpha);
  for (Complex& x : a) x += s;
  CVec b(p.beta);
  for (Complex& x : b) x += s;
  b[i - 1] = 2.0 - p.beta[i - 1];
  return ParameterSet::create(std::move(a), std::move(b));
}

}  // namespace hyperconnect
