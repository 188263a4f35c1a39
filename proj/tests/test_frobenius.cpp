#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hyperconnect/complexfn.hpp"
#include "hyperconnect/connection.hpp"
#include "hyperconnect/frobenius.hpp"

using namespace hyperconnect;

namespace {

ParameterSet ps(std::initializer_list<double> a, std::initializer_list<double> b) {
  CVec av, bv;
  for (double x : a) av.push_back(Complex(x, 0.0));
  for (double x : b) bv.push_back(Complex(x, 0.0));
  return ParameterSet::create(av, bv);
}

Complex poly_eval(const CVec& coeffs, Complex s) {
  Complex v(0.0);
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * s + coeffs[i];
  return v;
}

// greedy multiset match; returns the largest pairing distance
double multiset_distance(CVec a, CVec b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (const Complex& x : a) {
    std::size_t best = 0;
    double bestd = 1e300;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double d = std::abs(x - b[i]);
      if (d < bestd) {
        bestd = d;
        best = i;
      }
    }
    worst = std::max(worst, bestd);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

ParameterSet random_params(std::mt19937& rng, int n, double margin = 0.05) {
  std::uniform_real_distribution<double> ua(0.1, 1.9), ub(0.3, 2.7);
  for (;;) {
    CVec a, b;
    for (int i = 0; i < n; ++i) a.push_back(Complex(ua(rng), 0.0));
    for (int i = 0; i < n - 1; ++i) b.push_back(Complex(ub(rng), 0.0));
    ParameterSet p = ParameterSet::create(a, b);
    if (p.nonresonance_margin() >= margin) return p;
  }
}

}  // namespace

TEST_CASE("non-resonance assumption checks") {
  CHECK_THROWS_AS(ps({0.3, 0.5}, {2.0}).require_nonresonant(), AssumptionViolated);
  CHECK_THROWS_AS(ps({0.3, 0.5, 0.9}, {1.3, 2.3}).require_nonresonant(),
                  AssumptionViolated);  // beta_1 - beta_2 = -1
  // beta_3 = -1 exactly
  CHECK_THROWS_AS(ps({0.3, 0.5, 0.7}, {1.4, 1.1}).require_nonresonant(),
                  AssumptionViolated);
  CHECK_NOTHROW(ps({0.35, 0.55, 0.8}, {1.75, 2.1}).require_nonresonant());
  CHECK(ps({0.35, 0.55, 0.8}, {1.75, 2.1}).nonresonance_margin() ==
        doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("apply_delta_monomial") {
  SUBCASE("constants are killed") {
    const auto c = apply_delta_monomial(Complex(0.0, 0.0));
    CHECK(c[0].second == Complex(0.0, 0.0));
    CHECK(c[1].second == Complex(0.0, 0.0));
  }
  SUBCASE("s = 1 reproduces x d/dx (1-x) = -x") {
    const auto c = apply_delta_monomial(Complex(1.0, 0.0));
    CHECK(c[0].first == Complex(1.0, 0.0));
    CHECK(c[0].second == Complex(1.0, 0.0));
    CHECK(c[1].first == Complex(0.0, 0.0));
    CHECK(c[1].second == Complex(-1.0, 0.0));
  }
  SUBCASE("generic exponent against a finite-difference derivative") {
    const Complex s(0.73, 0.21);
    for (int k = 0; k < 20; ++k) {
      const double x = 0.05 + 0.04 * k;
      const double h = 1e-6;
      auto f = [&](double xx) { return std::pow(Complex(1.0 - xx, 0.0), s); };
      const Complex dfdx = (f(x + h) - f(x - h)) / (2.0 * h);
      const Complex delta_f = x * dfdx;
      const auto c = apply_delta_monomial(s);
      const Complex t(1.0 - x, 0.0);
      const Complex expect = c[0].second * std::pow(t, c[0].first) +
                             c[1].second * std::pow(t, c[1].first);
      CHECK(std::abs(delta_f - expect) < 1e-6 * std::abs(expect));
    }
  }
}

TEST_CASE("operator band: lowest order cancels identically") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int n = 2; n <= 5; ++n) {
    ParameterSet p = random_params(rng, n);
    const DeltaOperator op = DeltaOperator::from_params(p);
    for (int t = 0; t < 20; ++t) {
      const Complex s(u(rng) + t, u(rng));
      const CVec band = operator_band_at_one(op, s);
      double scale = 0.0;
      for (const Complex& w : band) scale = std::max(scale, std::abs(w));
      CHECK(std::abs(band[0]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("indicial polynomials and roots") {
  SUBCASE("point 0, n=2") {
    const ParameterSet p = ps({0.3, 0.5}, {1.4});
    const CVec roots = indicial_roots(DeltaOperator::from_params(p), 0);
    CHECK(multiset_distance(roots, {Complex(0.0, 0.0), Complex(-0.4, 0.0)}) < 1e-12);
  }
  SUBCASE("point 1, n=3 with beta_3 = -1.5") {
    const ParameterSet p = ps({0.2, 0.4, 0.6}, {1.5, 1.2});
    const CVec roots = indicial_roots(DeltaOperator::from_params(p), 1);
    CHECK(multiset_distance(
              roots, {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(1.5, 0.0)}) <
          1e-10);
  }
  SUBCASE("scheme multisets for random draws, n = 2..5") {
    std::mt19937 rng(17);
    for (int n = 2; n <= 5; ++n) {
      for (int rep = 0; rep < 10; ++rep) {
        const ParameterSet p = random_params(rng, n);
        const DeltaOperator op = DeltaOperator::from_params(p);
        CVec want0{Complex(0.0, 0.0)};
        for (const Complex& b : p.beta) want0.push_back(1.0 - b);
        CHECK(multiset_distance(indicial_roots(op, 0), want0) < 1e-10);
        CVec want1;
        for (int i = 0; i < n - 1; ++i) want1.push_back(Complex(i, 0.0));
        want1.push_back(-p.beta_n);
        CHECK(multiset_distance(indicial_roots(op, 1), want1) < 1e-10);
      }
    }
  }
  SUBCASE("recurrence stencil reproduces the indicial polynomial") {
    const ParameterSet p = ps({0.35, 0.55, 0.8}, {1.75, 2.1});
    const DeltaOperator op = DeltaOperator::from_params(p);
    const CVec poly = indicial_polynomial(op, 1);
    const RecurrenceAtOne rec(op, Complex(0.4, 0.1));
    for (int k = 0; k < 8; ++k) {
      const Complex s(0.3 * k - 0.9, 0.2);
      CHECK(std::abs(rec.indicial_factor(s) - poly_eval(poly, s)) <
            1e-10 * std::max(1.0, std::abs(poly_eval(poly, s))));
    }
    // exponents are the roots: the m=0 equation is satisfiable
    for (const Complex& rho :
         {Complex(0.0, 0.0), Complex(1.0, 0.0), -p.beta_n}) {
      CHECK(std::abs(rec.indicial_factor(rho)) < 1e-10);
    }
  }
}

TEST_CASE("basis at zero") {
  const ParameterSet p = ps({0.35, 0.55, 0.8}, {1.75, 2.1});
  const auto basis = local_basis_at_zero(p, 32);
  REQUIRE(basis.size() == 3);
  for (const auto& sol : basis) CHECK(sol.coeffs[0] == Complex(1.0, 0.0));
  CHECK(basis[0].exponent == Complex(0.0, 0.0));
  CHECK(std::abs(basis[1].exponent - Complex(-0.75, 0.0)) < 1e-14);
  CHECK(std::abs(basis[2].exponent - Complex(-1.1, 0.0)) < 1e-14);

  CoefficientStream stream(p);
  for (int m = 0; m <= 32; ++m) {
    CHECK(std::abs(basis[0].coeffs[static_cast<std::size_t>(m)] - stream.coeff(m)) <
          1e-14 * std::max(1.0, std::abs(stream.coeff(m))));
  }
  CHECK_THROWS_AS(local_basis_at_zero(ps({0.3, 0.5, 0.7}, {1.4, 1.1}), 16),
                  AssumptionViolated);
}

TEST_CASE("basis at one: classical Gauss solutions for n=2") {
  const double a1 = 0.3, a2 = 0.5, b1 = 1.7;  // beta_2 = -0.9
  const ParameterSet p = ps({a1, a2}, {b1});
  const auto basis = local_basis_at_one(p, 40);
  REQUIRE(basis.size() == 2);
  CHECK(basis[0].exponent == Complex(0.0, 0.0));
  CHECK(std::abs(basis[1].exponent - Complex(0.9, 0.0)) < 1e-14);  // -beta_2

  // y_1: 2F1(a1, a2; a1+a2-b1+1; t); y_2: t^{-b2} 2F1(b1-a1, b1-a2; b1-a1-a2+1; t)
  auto stream2f1 = [](double a, double b, double c, int M) {
    CVec out{Complex(1.0, 0.0)};
    for (int m = 0; m < M; ++m) {
      out.push_back(out.back() * (a + m) * (b + m) / ((c + m) * (m + 1.0)));
    }
    return out;
  };
  const CVec y1 = stream2f1(a1, a2, a1 + a2 - b1 + 1.0, 40);
  const CVec y2 = stream2f1(b1 - a1, b1 - a2, b1 - a1 - a2 + 1.0, 40);
  for (int m = 0; m <= 40; ++m) {
    CHECK(std::abs(basis[0].coeffs[static_cast<std::size_t>(m)] -
                   y1[static_cast<std::size_t>(m)]) <
          1e-12 * std::max(1.0, std::abs(y1[static_cast<std::size_t>(m)])));
    CHECK(std::abs(basis[1].coeffs[static_cast<std::size_t>(m)] -
                   y2[static_cast<std::size_t>(m)]) <
          1e-12 * std::max(1.0, std::abs(y2[static_cast<std::size_t>(m)])));
  }
}

TEST_CASE("basis at one: canonical structure and determinism") {
  std::mt19937 rng(23);
  for (int n = 2; n <= 5; ++n) {
    const ParameterSet p = random_params(rng, n, 0.02);
    const auto basis = local_basis_at_one(p, 24);
    for (int i = 1; i <= n; ++i) {
      const auto& sol = basis[static_cast<std::size_t>(i - 1)];
      CHECK(sol.coeffs[0] == Complex(1.0, 0.0));
      if (i <= n - 1) {
        CHECK(std::abs(sol.exponent - Complex(i - 1, 0.0)) < 1e-14);
        for (int j = 1; j <= n - 1 - i; ++j) {
          CHECK(sol.coeffs[static_cast<std::size_t>(j)] == Complex(0.0, 0.0));
        }
      }
    }
    const auto again = local_basis_at_one(p, 24);
    for (int i = 0; i < n; ++i) {
      CHECK(again[static_cast<std::size_t>(i)].coeffs ==
            basis[static_cast<std::size_t>(i)].coeffs);  // bit-identical
    }
  }
}

TEST_CASE("basis at one: reference coefficients") {
  // frozen from a 40-digit recurrence run
  const ParameterSet p = ps({0.35, 0.55, 0.8}, {1.75, 2.1});
  const auto basis = local_basis_at_one(p, 8);
  CHECK(std::abs(basis[0].coeffs[2] - Complex(0.513333333333333333, 0.0)) < 1e-14);
  CHECK(std::abs(basis[0].coeffs[3] - Complex(0.903366013071895425, 0.0)) < 1e-13);
  CHECK(std::abs(basis[1].coeffs[1] - Complex(0.208333333333333333, 0.0)) < 1e-14);
  CHECK(std::abs(basis[1].coeffs[2] - Complex(-0.37190359477124183, 0.0)) < 1e-13);
  CHECK(std::abs(basis[2].coeffs[1] - Complex(1.75079365079365079, 0.0)) < 1e-13);
  CHECK(std::abs(basis[2].coeffs[2] - Complex(2.33180244788678524, 0.0)) < 1e-13);
}

TEST_CASE("basis at one: custom normalization") {
  const ParameterSet p = ps({0.35, 0.55, 0.8}, {1.75, 2.1});
  const Normalization norm = Normalization::custom(
      {{Complex(1.0, 0.0), Complex(0.5, 0.0)}, {Complex(1.0, 0.0)}, {Complex(1.0, 0.0)}});
  const auto basis = local_basis_at_one(p, 8, norm);
  CHECK(basis[0].coeffs[1] == Complex(0.5, 0.0));
  CHECK_THROWS_AS(local_basis_at_one(
                      p, 8,
                      Normalization::custom({{Complex(0.0, 0.0), Complex(0.0, 0.0)},
                                             {Complex(1.0, 0.0)},
                                             {Complex(1.0, 0.0)}})),
                  Error);
}

TEST_CASE("evaluate_local") {
  const ParameterSet p = ps({0.2, 0.4, 0.6}, {1.45, 1.25});  // beta_3 = -1.5
  const auto basis0 = local_basis_at_zero(p, 64);
  const auto basis1 = local_basis_at_one(p, 64);

  SUBCASE("value at the expansion point is d_0") {
    CHECK(evaluate_local(basis0[0], Complex(0.0, 0.0)).value == Complex(1.0, 0.0));
    CHECK(evaluate_local(basis1[0], Complex(1.0, 0.0)).value == Complex(1.0, 0.0));
  }
  SUBCASE("y_1^[0] agrees with the series evaluator") {
    const SeriesValue a = evaluate_local(basis0[0], Complex(0.3, 0.0));
    const SeriesValue b = evaluate_nFn1(p, 0, Complex(0.3, 0.0));
    CHECK(std::abs(a.value - b.value) <=
          a.tail_bound + b.tail_bound + 1e-14 * std::abs(b.value));
  }
  SUBCASE("singular solution branch at x = 0.7: (0.3)^{1.5} real positive") {
    const SeriesValue v = evaluate_local(basis1[2], Complex(0.7, 0.0));
    Complex series(0.0);
    for (std::size_t m = basis1[2].coeffs.size(); m-- > 0;) {
      series = series * Complex(0.3, 0.0) + basis1[2].coeffs[m];
    }
    const double pref = std::pow(0.3, 1.5);
    CHECK(std::abs(v.value - pref * series) < 1e-12 * std::abs(v.value));
    CHECK(v.value.imag() == 0.0);
  }
  SUBCASE("domain and branch guards") {
    CHECK_THROWS_AS(evaluate_local(basis0[0], Complex(1.2, 0.0)), OutOfDomain);
    CHECK_THROWS_AS(evaluate_local(basis1[2], Complex(1.5, 0.0)), BranchAmbiguity);
    CHECK_NOTHROW(evaluate_local(basis1[0], Complex(1.5, 0.0)));  // integer exponent
  }
  SUBCASE("truncation honesty on interior points") {
    for (double x : {0.2, 0.45, 0.6}) {
      LocalSolution cut;
      cut.expansion_point = 0;
      cut.exponent = basis0[0].exponent;
      cut.coeffs = CVec(basis0[0].coeffs.begin(), basis0[0].coeffs.begin() + 17);
      cut.truncation_order = 16;
      cut.label = 1;
      const SeriesValue a16 = evaluate_local(cut, Complex(x, 0.0));
      const SeriesValue full = evaluate_local(basis0[0], Complex(x, 0.0));
      CHECK(std::abs(a16.value - full.value) <= a16.tail_bound * 1.5 + 1e-15);
    }
  }
}

TEST_CASE("parameter-shift covariance of the basis at one") {
  // x^{1-beta_i} y_j^[1](alpha_i; x) expanded in the original basis via the
  // transfer map must reproduce the shifted solutions pointwise.
  const ParameterSet p = ps({0.35, 0.55, 0.8}, {1.75, 2.1});
  const auto basis1 = local_basis_at_one(p, 96);
  for (int i = 1; i <= 2; ++i) {
    const ParameterSet q = shift_parameters(p, i);
    const auto sbasis = local_basis_at_one(q, 96);
    const int n = p.n;
    for (int j = 1; j <= n; ++j) {
      CVec unit(static_cast<std::size_t>(n), Complex(0.0, 0.0));
      unit[static_cast<std::size_t>(j - 1)] = 1.0;
      const CVec tcol = map_shifted_first_column(p, basis1, i, unit, sbasis);
      for (double x : {0.4, 0.5, 0.6}) {
        const Complex lhs =
            std::pow(Complex(x, 0.0), 1.0 - p.beta[static_cast<std::size_t>(i - 1)]) *
            evaluate_local(sbasis[static_cast<std::size_t>(j - 1)], Complex(x, 0.0))
                .value;
        Complex rhs(0.0);
        for (int k = 1; k <= n; ++k) {
          rhs += tcol[static_cast<std::size_t>(k - 1)] *
                 evaluate_local(basis1[static_cast<std::size_t>(k - 1)], Complex(x, 0.0))
                     .value;
        }
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
}
