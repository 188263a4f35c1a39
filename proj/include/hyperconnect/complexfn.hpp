#pragma once

#include <cstdint>

#include "hyperconnect/types.hpp"

namespace hyperconnect {

/// True when z is within tol of a non-positive integer.
bool near_nonpositive_integer(Complex z, double tol = kPoleTolerance);

/// Distance from z to the nearest integer (in the complex plane).
double integer_distance(Complex z);

/// Complex gamma function, Lanczos rational approximation with reflection
/// for Re z < 0.5. Relative error below ~1e-13 for |z| <= 50 away from
/// poles. Throws PoleError within pole_tol of a non-positive integer.
Complex gamma(Complex z, double pole_tol = kPoleTolerance);

/// log Gamma(z), analytic on the right half-plane, reflection elsewhere.
/// exp(log_gamma(z)) agrees with gamma(z); individual values may differ
/// from the principal log of gamma(z) by 2*pi*i on the left half-plane.
Complex log_gamma(Complex z, double pole_tol = kPoleTolerance);

/// 1/Gamma(z); entire, returns exactly 0 at non-positive integers.
Complex reciprocal_gamma(Complex z);

/// Rising factorial (a)_m = a(a+1)...(a+m-1), exact product form; 1 for m=0.
Complex pochhammer(Complex a, std::int64_t m);

/// Product of pochhammer over all entries of v.
Complex pochhammer_vec(const CVec& v, std::int64_t m);

/// Product of gamma over all entries, computed as exp of summed log_gamma.
/// PoleError names the offending entry index.
Complex gamma_vec(const CVec& v);

/// Gamma(m+1)/Gamma(m+b) via log-gamma difference; m >= 1.
Complex stirling_ratio(std::int64_t m, Complex b);

/// Leading Stirling asymptote m^(1-b) of stirling_ratio, for diagnostics.
Complex stirling_ratio_asymptote(std::int64_t m, Complex b);

/// sin(pi z) with argument reduction to keep full accuracy near integers.
Complex sin_pi(Complex z);

}  // namespace hyperconnect
