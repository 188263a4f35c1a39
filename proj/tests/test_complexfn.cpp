#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperconnect/complexfn.hpp"

using namespace hyperconnect;

namespace {

double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::abs(want);
}

constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace

TEST_CASE("gamma at integers and half-integers") {
  CHECK(rel_err(gamma(Complex(1.0, 0.0)), Complex(1.0, 0.0)) < 1e-14);
  CHECK(rel_err(gamma(Complex(5.0, 0.0)), Complex(24.0, 0.0)) < 1e-14);
  // sqrt(pi), high-precision reference
  CHECK(rel_err(gamma(Complex(0.5, 0.0)),
                Complex(1.7724538509055160273, 0.0)) < 1e-13);
  CHECK(rel_err(gamma(Complex(2.5, 0.0)),
                Complex(1.3293403881791370205, 0.0)) < 1e-13);
  CHECK(rel_err(gamma(Complex(-1.5, 0.0)),
                Complex(2.3632718012073547031, 0.0)) < 1e-13);
  CHECK(rel_err(gamma(Complex(10.5, 0.0)),
                Complex(1133278.3889487855673, 0.0)) < 1e-13);
  CHECK(rel_err(gamma(Complex(30.25, 0.0)),
                Complex(2.062805313775346887e+31, 0.0)) < 1e-13);
}

TEST_CASE("gamma at complex arguments, both half-planes") {
  CHECK(rel_err(gamma(Complex(2.5, 1.3)),
                Complex(0.49165633901835107895, 0.75282593348509702118)) < 1e-13);
  CHECK(rel_err(gamma(Complex(-3.2, 0.7)),
                Complex(-0.02678379726557053972, 0.092468197955358287657)) < 1e-12);
}

TEST_CASE("gamma pole handling") {
  CHECK_THROWS_AS(gamma(Complex(0.0, 0.0)), PoleError);
  CHECK_THROWS_AS(gamma(Complex(-3.0, 0.0)), PoleError);
  CHECK_THROWS_AS(gamma(Complex(-3.0 + 1e-9, 0.0)), PoleError);
  CHECK_NOTHROW(gamma(Complex(-3.5, 0.0)));
  CHECK_NOTHROW(gamma(Complex(-3.0, 1e-3)));
}

TEST_CASE("log_gamma values and exp consistency") {
  CHECK(std::abs(log_gamma(Complex(1.0, 0.0))) < 1e-14);
  CHECK(std::abs(log_gamma(Complex(2.0, 0.0))) < 1e-14);
  CHECK(rel_err(log_gamma(Complex(10.5, 0.0)),
                Complex(13.940625219403763633, 0.0)) < 1e-14);
  CHECK(rel_err(log_gamma(Complex(3.5, 14.2)),
                Complex(-13.405212946777840168, 27.876649335046196291)) < 1e-12);

  // Recursion oracle for 10.5: log Gamma(z+1) = log z + log Gamma(z).
  const Complex lhs = log_gamma(Complex(10.5, 0.0));
  const Complex rhs = std::log(Complex(9.5, 0.0)) + log_gamma(Complex(9.5, 0.0));
  CHECK(std::abs(lhs - rhs) < 1e-13 * std::abs(lhs));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(-15.0, 15.0), im(-15.0, 15.0);
  for (int t = 0; t < 200; ++t) {
    const Complex z(re(rng), im(rng));
    if (integer_distance(z) < 1e-2) continue;
    const Complex g = gamma(z);
    const Complex lg = log_gamma(z);
    CHECK(std::abs(std::exp(lg) - g) < 1e-12 * std::abs(g));
  }
}

TEST_CASE("gamma recursion invariant, 1000 random draws") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> re(-20.0, 20.0), im(-20.0, 20.0);
  int tested = 0;
  while (tested < 1000) {
    const Complex z(re(rng), im(rng));
    if (near_nonpositive_integer(z, 1e-3) ||
        near_nonpositive_integer(z + 1.0, 1e-3)) {
      continue;
    }
    const Complex lhs = gamma(z + 1.0);
    const Complex rhs = z * gamma(z);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
    ++tested;
  }
}

TEST_CASE("gamma reflection invariant, 1000 random draws") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> re(-20.0, 20.0), im(-20.0, 20.0);
  int tested = 0;
  while (tested < 1000) {
    const Complex z(re(rng), im(rng));
    if (integer_distance(z) < 1e-3) continue;
    const Complex prod = gamma(z) * gamma(1.0 - z) * sin_pi(z) / kPi;
    CHECK(std::abs(prod - 1.0) < 1e-11);
    ++tested;
  }
}

TEST_CASE("pochhammer product form") {
  CHECK(pochhammer(Complex(2.7, -1.1), 0) == Complex(1.0, 0.0));
  CHECK(rel_err(pochhammer(Complex(2.0, 0.0), 3), Complex(24.0, 0.0)) < 1e-15);
  // (-1.5)(−0.5)(0.5)(1.5) = 0.5625, equal to Gamma(2.5)/Gamma(-1.5)
  CHECK(rel_err(pochhammer(Complex(-1.5, 0.0), 4), Complex(0.5625, 0.0)) < 1e-15);
  CHECK(rel_err(pochhammer(Complex(-1.5, 0.0), 4),
                gamma(Complex(2.5, 0.0)) / gamma(Complex(-1.5, 0.0))) < 1e-13);

  // recursion is exact in the product formulation
  const Complex a(0.37, 0.21);
  for (int m = 0; m < 20; ++m) {
    CHECK(pochhammer(a, m + 1) ==
          pochhammer(a, m) * (a + static_cast<double>(m)));
  }
}

TEST_CASE("pochhammer_vec and gamma_vec") {
  const CVec v12 = {Complex(1.0, 0.0), Complex(2.0, 0.0)};
  CHECK(pochhammer_vec(v12, 0) == Complex(1.0, 0.0));
  CHECK(rel_err(pochhammer_vec(v12, 2), Complex(12.0, 0.0)) < 1e-15);

  const CVec v = {Complex(0.3, 0.0), Complex(0.5, 0.0), Complex(0.7, 0.0)};
  Complex termwise(1.0, 0.0);
  for (const Complex& a : v) termwise *= gamma(a + 5.0) / gamma(a);
  CHECK(rel_err(pochhammer_vec(v, 5), termwise) < 1e-12);

  CHECK(rel_err(gamma_vec({Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0)}),
                Complex(1.0, 0.0)) < 1e-14);
  CHECK(rel_err(gamma_vec({Complex(5.0, 0.0)}), Complex(24.0, 0.0)) < 1e-14);
  CHECK(rel_err(gamma_vec({Complex(0.3, 0.0), Complex(1.4, 0.0)}),
                Complex(2.6543109203395020981, 0.0)) < 1e-13);
  CHECK_THROWS_AS(gamma_vec({Complex(0.5, 0.0), Complex(-2.0, 0.0)}), PoleError);
}

TEST_CASE("stirling_ratio") {
  for (std::int64_t m : {1, 5, 100}) {
    CHECK(rel_err(stirling_ratio(m, Complex(1.0, 0.0)), Complex(1.0, 0.0)) < 1e-13);
  }
  CHECK(rel_err(stirling_ratio(4, Complex(2.0, 0.0)), Complex(0.2, 0.0)) < 1e-13);

  // leading asymptote m^{1-b} agrees to O(1/m)
  const Complex exact = stirling_ratio(1000, Complex(-0.6, 0.0));
  const Complex asym = stirling_ratio_asymptote(1000, Complex(-0.6, 0.0));
  CHECK(rel_err(asym, exact) < 2e-3);
  CHECK_THROWS_AS(stirling_ratio(3, Complex(-5.0, 0.0)), PoleError);
}

TEST_CASE("reciprocal_gamma vanishes at non-positive integers") {
  CHECK(reciprocal_gamma(Complex(0.0, 0.0)) == Complex(0.0, 0.0));
  CHECK(reciprocal_gamma(Complex(-4.0, 0.0)) == Complex(0.0, 0.0));
  CHECK(rel_err(reciprocal_gamma(Complex(3.0, 0.0)), Complex(0.5, 0.0)) < 1e-13);
}
