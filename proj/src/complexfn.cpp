#include "hyperconnect/complexfn.hpp"

#include <array>
#include <cmath>

namespace hyperconnect {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640561764;

// Lanczos coefficients for g = 607/128 (Godfrey's set, full double
// accuracy on the right half-plane).
constexpr double kLanczosG = 4.7421875;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

// Lanczos series S(z) for Re z >= 0.5.
Complex lanczos_sum(Complex z) {
  Complex s = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    s += kLanczos[i] / (z - 1.0 + static_cast<double>(i));
  }
  return s;
}

// log Gamma on Re z >= 0.5 (no reflection).
Complex log_gamma_right(Complex z) {
  const Complex t = z + (kLanczosG - 0.5);
  return kLogSqrt2Pi + (z - 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

}  // namespace

bool near_nonpositive_integer(Complex z, double tol) {
  if (z.real() > 0.5) return false;
  const double r = std::round(z.real());
  if (r > 0.0) return false;
  return std::hypot(z.real() - r, z.imag()) < tol;
}

double integer_distance(Complex z) {
  return std::hypot(z.real() - std::round(z.real()), z.imag());
}

Complex sin_pi(Complex z) {
  const double k = std::round(z.real());
  Complex s = std::sin(kPi * (z - k));
  if (std::fmod(k, 2.0) != 0.0) s = -s;
  return s;
}

Complex gamma(Complex z, double pole_tol) {
  if (near_nonpositive_integer(z, pole_tol)) {
    throw PoleError("gamma: argument within " + std::to_string(pole_tol) +
                    " of a non-positive integer");
  }
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return kPi / (sin_pi(z) * std::exp(log_gamma_right(1.0 - z)));
  }
  return std::exp(log_gamma_right(z));
}

Complex log_gamma(Complex z, double pole_tol) {
  if (near_nonpositive_integer(z, pole_tol)) {
    throw PoleError("log_gamma: argument within " + std::to_string(pole_tol) +
                    " of a non-positive integer");
  }
  if (z.real() < 0.5) {
    return std::log(kPi) - std::log(sin_pi(z)) - log_gamma_right(1.0 - z);
  }
  return log_gamma_right(z);
}

Complex reciprocal_gamma(Complex z) {
  if (near_nonpositive_integer(z, kPoleTolerance)) return Complex(0.0, 0.0);
  if (z.real() < 0.5) {
    return sin_pi(z) * std::exp(log_gamma_right(1.0 - z)) / kPi;
  }
  return std::exp(-log_gamma_right(z));
}

Complex pochhammer(Complex a, std::int64_t m) {
  Complex p(1.0, 0.0);
  for (std::int64_t k = 0; k < m; ++k) {
    p *= a + static_cast<double>(k);
  }
  return p;
}

Complex pochhammer_vec(const CVec& v, std::int64_t m) {
  Complex p(1.0, 0.0);
  for (const Complex& a : v) {
    p *= pochhammer(a, m);
  }
  return p;
}

Complex gamma_vec(const CVec& v) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (near_nonpositive_integer(v[i], kPoleTolerance)) {
      throw PoleError("gamma_vec: entry " + std::to_string(i) +
                      " is at a non-positive integer");
    }
    s += log_gamma(v[i]);
  }
  return std::exp(s);
}

Complex stirling_ratio(std::int64_t m, Complex b) {
  const Complex mb = b + static_cast<double>(m);
  if (near_nonpositive_integer(mb, kPoleTolerance)) {
    throw PoleError("stirling_ratio: m+b is at a non-positive integer");
  }
  return std::exp(log_gamma(Complex(static_cast<double>(m) + 1.0, 0.0)) -
                  log_gamma(mb));
}

Complex stirling_ratio_asymptote(std::int64_t m, Complex b) {
  return std::pow(Complex(static_cast<double>(m), 0.0), 1.0 - b);
}

}  // namespace hyperconnect
