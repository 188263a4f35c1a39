#include "hyperconnect/frobenius.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "hyperconnect/complexfn.hpp"

namespace hyperconnect {

namespace {

// Ascending-coefficient polynomial helpers for the indicial computation.
using Poly = CVec;

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Poly poly_scale(const Poly& a, Complex c) {
  Poly r(a);
  for (Complex& x : r) x *= c;
  return r;
}

// (s + c) * P(s)
Poly poly_mul_linear(const Poly& p, Complex c) {
  Poly r(p.size() + 1, Complex(0.0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i + 1] += p[i];
    r[i] += c * p[i];
  }
  return r;
}

// Band of L t^s with polynomial-in-s coefficients; index k multiplies
// t^{s+k-n}, k = 0..n+1. Mirrors operator_band_at_one.
std::vector<Poly> operator_band_poly(const DeltaOperator& op) {
  const int n = op.rank();
  const int size = n + 2;
  auto apply = [&](std::vector<Poly> cur, Complex c) {
    std::vector<Poly> out(size);
    for (int k = 0; k < size; ++k) {
      if (cur[k].empty()) continue;
      const double off = static_cast<double>(k - n);
      // (s + off + c) stays at k; -(s + off) drops to k-1.
      out[k] = poly_add(out[k], poly_mul_linear(cur[k], off + c));
      if (k > 0) {
        out[k - 1] =
            poly_add(out[k - 1], poly_scale(poly_mul_linear(cur[k], off), -1.0));
      }
    }
    return out;
  };

  std::vector<Poly> left(size);
  left[n] = Poly{Complex(1.0)};
  for (const Complex& c : op.left_offsets) left = apply(std::move(left), c);

  std::vector<Poly> right(size);
  right[n] = Poly{Complex(1.0)};
  for (const Complex& c : op.right_offsets) right = apply(std::move(right), c);

  // (1 - t) * right, then band = left - (that).
  std::vector<Poly> band(size);
  for (int k = 0; k < size; ++k) {
    band[k] = left[k];
    band[k] = poly_add(band[k], poly_scale(right[k], -1.0));
    if (k > 0) band[k] = poly_add(band[k], right[k - 1]);
  }
  return band;
}

CVec poly_roots(const Poly& p) {
  int deg = static_cast<int>(p.size()) - 1;
  while (deg > 0 && std::abs(p[static_cast<std::size_t>(deg)]) == 0.0) --deg;
  if (deg <= 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  const Complex lead = p[static_cast<std::size_t>(deg)];
  for (int i = 0; i < deg; ++i) {
    companion(i, deg - 1) = -p[static_cast<std::size_t>(i)] / lead;
    if (i + 1 < deg) companion(i + 1, i) = 1.0;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);
  CVec roots(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return roots;
}

}  // namespace

DeltaOperator DeltaOperator::from_params(const ParameterSet& p) {
  DeltaOperator op;
  op.left_offsets.push_back(Complex(0.0));
  for (const Complex& b : p.beta) op.left_offsets.push_back(b - 1.0);
  op.right_offsets = p.alpha;
  return op;
}

std::array<std::pair<Complex, Complex>, 2> apply_delta_monomial(Complex s) {
  return {{{s, s}, {s - 1.0, -s}}};
}

CVec operator_band_at_one(const DeltaOperator& op, Complex s) {
  const int n = op.rank();
  const int size = n + 2;
  auto apply = [&](CVec cur, Complex c) {
    CVec out(static_cast<std::size_t>(size), Complex(0.0));
    for (int k = 0; k < size; ++k) {
      const Complex a = cur[static_cast<std::size_t>(k)];
      if (a == Complex(0.0)) continue;
      const Complex u = s + static_cast<double>(k - n);
      out[static_cast<std::size_t>(k)] += (u + c) * a;
      if (k > 0) out[static_cast<std::size_t>(k - 1)] -= u * a;
    }
    return out;
  };

  CVec left(static_cast<std::size_t>(size), Complex(0.0));
  left[static_cast<std::size_t>(n)] = 1.0;
  for (const Complex& c : op.left_offsets) left = apply(std::move(left), c);

  CVec right(static_cast<std::size_t>(size), Complex(0.0));
  right[static_cast<std::size_t>(n)] = 1.0;
  for (const Complex& c : op.right_offsets) right = apply(std::move(right), c);

  CVec band(static_cast<std::size_t>(size), Complex(0.0));
  for (int k = 0; k < size; ++k) {
    band[static_cast<std::size_t>(k)] = left[static_cast<std::size_t>(k)] -
                                        right[static_cast<std::size_t>(k)];
    if (k > 0) band[static_cast<std::size_t>(k)] += right[static_cast<std::size_t>(k - 1)];
  }
  return band;
}

CVec RecurrenceAtOne::stencil(std::int64_t m) const {
  const int n = op_.rank();
  const std::int64_t q = std::min<std::int64_t>(m, n);
  CVec w(static_cast<std::size_t>(q) + 1, Complex(0.0));
  for (std::int64_t k = 0; k <= q; ++k) {
    const CVec band =
        operator_band_at_one(op_, rho_ + static_cast<double>(m - k));
    // W_k multiplies d_{m-k}: the t^{rho+m-n+1} coefficient of L t^{rho+m-k},
    // which sits at band index k+1.
    w[static_cast<std::size_t>(k)] = band[static_cast<std::size_t>(k) + 1];
  }
  return w;
}

Complex RecurrenceAtOne::indicial_factor(Complex s) const {
  return operator_band_at_one(op_, s)[1];
}

CVec indicial_polynomial(const DeltaOperator& op, int point) {
  if (point == 0) {
    // s * prod(s + beta_i - 1): read directly off the factored operator.
    Poly p{Complex(1.0)};
    for (const Complex& c : op.left_offsets) p = poly_mul_linear(p, c);
    return p;
  }
  if (point != 1) throw Error("indicial_polynomial: point must be 0 or 1");
  return operator_band_poly(op)[1];
}

CVec indicial_roots(const DeltaOperator& op, int point) {
  return poly_roots(indicial_polynomial(op, point));
}

Normalization Normalization::canonical_for(int n) {
  Normalization norm;
  norm.canonical = false;
  norm.table.resize(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const int count = (i <= n - 1) ? n - i : 1;
    norm.table[static_cast<std::size_t>(i - 1)] =
        CVec(static_cast<std::size_t>(count), Complex(0.0));
    norm.table[static_cast<std::size_t>(i - 1)][0] = 1.0;
  }
  return norm;
}

Normalization Normalization::custom(std::vector<CVec> table) {
  Normalization norm;
  norm.canonical = false;
  norm.table = std::move(table);
  return norm;
}

Complex Normalization::free_coeff(int n, int i, int j) const {
  if (canonical) return j == 0 ? Complex(1.0) : Complex(0.0);
  if (table.size() != static_cast<std::size_t>(n)) {
    throw Error("Normalization: table must have n rows");
  }
  const CVec& row = table[static_cast<std::size_t>(i - 1)];
  const int count = (i <= n - 1) ? n - i : 1;
  if (row.size() != static_cast<std::size_t>(count)) {
    throw Error("Normalization: row " + std::to_string(i) + " must list " +
                std::to_string(count) + " coefficients");
  }
  return row[static_cast<std::size_t>(j)];
}

std::vector<LocalSolution> local_basis_at_zero(const ParameterSet& p, int M) {
  p.require_nonresonant();
  std::vector<LocalSolution> basis;
  basis.reserve(static_cast<std::size_t>(p.n));
  for (int i = 0; i <= p.n - 1; ++i) {
    const ParameterSet q = (i == 0) ? p : shifted_raw(p, i);
    LocalSolution sol;
    sol.expansion_point = 0;
    sol.exponent = (i == 0) ? Complex(0.0) : 1.0 - p.beta[static_cast<std::size_t>(i - 1)];
    sol.label = i + 1;
    sol.truncation_order = M;
    sol.coeffs.resize(static_cast<std::size_t>(M) + 1);
    CoefficientStream stream(q);
    for (int m = 0; m <= M; ++m) sol.coeffs[static_cast<std::size_t>(m)] = stream.coeff(m);
    basis.push_back(std::move(sol));
  }
  return basis;
}

std::vector<LocalSolution> local_basis_at_one(const ParameterSet& p, int M,
                                              const Normalization& norm) {
  p.require_nonresonant();
  const int n = p.n;
  const DeltaOperator op = DeltaOperator::from_params(p);
  std::vector<LocalSolution> basis;
  basis.reserve(static_cast<std::size_t>(n));

  for (int i = 1; i <= n; ++i) {
    const Complex rho =
        (i <= n - 1) ? Complex(static_cast<double>(i - 1)) : -p.beta_n;
    const Complex d0 = norm.free_coeff(n, i, 0);
    if (d0 == Complex(0.0)) {
      throw Error("local_basis_at_one: leading coefficient of solution " +
                  std::to_string(i) + " must be nonzero");
    }
    RecurrenceAtOne rec(op, rho);
    LocalSolution sol;
    sol.expansion_point = 1;
    sol.exponent = rho;
    sol.label = i;
    sol.truncation_order = M;
    sol.coeffs.assign(static_cast<std::size_t>(M) + 1, Complex(0.0));
    sol.coeffs[0] = d0;

    const int last_resonant = (i <= n - 1) ? (n - 1 - i) : 0;
    for (int m = 1; m <= M; ++m) {
      const CVec w = rec.stencil(m);
      Complex rhs(0.0);
      double scale = 0.0;
      for (std::size_t k = 1; k < w.size(); ++k) {
        const Complex term = w[k] * sol.coeffs[static_cast<std::size_t>(m) - k];
        rhs += term;
        scale += std::abs(term);
      }
      if (i <= n - 1 && m <= last_resonant) {
        // rho + m collides with a larger integer exponent: the equation's
        // leading factor vanishes and d_m is a free slot. The remaining
        // equation must be consistent, or the solution would need a log term.
        if (std::abs(rhs) > 1e-10 * std::max(scale, 1e-300)) {
          throw ResonanceInconsistency(
              "local_basis_at_one: resonant order " + std::to_string(m) +
              " of solution " + std::to_string(i) + " has residual " +
              std::to_string(std::abs(rhs)));
        }
        sol.coeffs[static_cast<std::size_t>(m)] = norm.free_coeff(n, i, m);
      } else {
        sol.coeffs[static_cast<std::size_t>(m)] = -rhs / w[0];
      }
    }
    basis.push_back(std::move(sol));
  }
  return basis;
}

SeriesValue evaluate_local(const LocalSolution& sol, Complex x) {
  const Complex z = (sol.expansion_point == 0) ? x : 1.0 - x;
  const double az = std::abs(z);
  if (az >= 1.0) {
    throw OutOfDomain("evaluate_local: point outside the disk of convergence");
  }
  const bool integer_exponent = integer_distance(sol.exponent) < 1e-12;
  if (z.imag() == 0.0 && z.real() < 0.0 && !integer_exponent) {
    throw BranchAmbiguity(
        "evaluate_local: point on the branch cut of the local variable");
  }

  Complex prefactor;
  if (z == Complex(0.0)) {
    if (std::abs(sol.exponent) < 1e-14) {
      prefactor = 1.0;
    } else if (sol.exponent.real() > 0.0) {
      prefactor = 0.0;
    } else {
      throw OutOfDomain("evaluate_local: singular exponent at the expansion point");
    }
  } else {
    prefactor = std::pow(z, sol.exponent);
  }

  Complex sum(0.0);
  for (std::size_t m = sol.coeffs.size(); m-- > 0;) {
    sum = sum * z + sol.coeffs[m];
  }

  const std::size_t M = sol.coeffs.size() - 1;
  double tail = 0.0;
  if (az > 0.0 && M >= 1) {
    const double last = std::abs(sol.coeffs[M]);
    const double prev = std::abs(sol.coeffs[M - 1]);
    double r = az;
    if (prev > 0.0) r = std::max(r, az * last / prev);
    r = std::min(r, 0.999);
    tail = std::abs(prefactor) * last * std::pow(az, static_cast<double>(M)) *
           r / (1.0 - r);
  }
  return SeriesValue{prefactor * sum, tail,
                     static_cast<std::int64_t>(sol.coeffs.size()), false};
}

}  // namespace hyperconnect
