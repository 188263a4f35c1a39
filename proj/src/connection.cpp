#include "hyperconnect/connection.hpp"

#include <cmath>

#include "hyperconnect/complexfn.hpp"
#include "hyperconnect/series.hpp"

namespace hyperconnect {

namespace {

void check_theorem_hypothesis(const ParameterSet& p) {
  if (p.beta_n.real() >= -static_cast<double>(p.n) + 2.0) {
    throw DivergentAtOne("theorem hypothesis violated: Re beta_n < -n+2");
  }
}

// Coefficients of (1-t)^c up to order K: b_k = (-c)_k / k!.
CVec binomial_series(Complex c, int K) {
  CVec b(static_cast<std::size_t>(K) + 1);
  b[0] = 1.0;
  for (int k = 1; k <= K; ++k) {
    b[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k - 1)] *
                                     (-c + static_cast<double>(k - 1)) /
                                     static_cast<double>(k);
  }
  return b;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// One column of P for the given (possibly shifted) parameter tuple.
CVec p_column(const ParameterSet& q, const UnitSeriesOptions& opt,
              std::vector<double>* err) {
  const int n = q.n;
  CVec v(static_cast<std::size_t>(n));
  if (err) err->assign(static_cast<std::size_t>(n), 0.0);
  SeriesOptions sopt;
  sopt.tol = opt.tol;
  sopt.max_terms_unit = opt.max_terms;

  for (int r = 1; r <= n - 1; ++r) {
    const Complex pref = ((r - 1) % 2 == 0 ? 1.0 : -1.0) / factorial(r - 1) *
                         pochhammer_vec(q.alpha, r - 1) /
                         pochhammer_vec(q.beta, r - 1);
    const SeriesValue s = evaluate_at_one(q, r - 1, sopt);
    v[static_cast<std::size_t>(r - 1)] = pref * s.value;
    if (err) (*err)[static_cast<std::size_t>(r - 1)] = std::abs(pref) * s.tail_bound;
  }

  // Last row: Gamma(beta_1..beta_{n-1}, beta_n) / Gamma(alpha_1..alpha_n),
  // as a single exponentiated log-gamma sum. A numerator-parameter pole
  // (integer alpha, the reducible case) makes the entry exactly zero.
  bool zero = false;
  Complex logs(0.0);
  for (const Complex& a : q.alpha) {
    if (near_nonpositive_integer(a)) {
      zero = true;
      break;
    }
    logs -= log_gamma(a);
  }
  if (zero) {
    v[static_cast<std::size_t>(n - 1)] = 0.0;
  } else {
    for (const Complex& b : q.beta) logs += log_gamma(b);
    logs += log_gamma(q.beta_n);
    v[static_cast<std::size_t>(n - 1)] = std::exp(logs);
  }
  return v;
}

// Free d-table of the basis at 1: row j (0-based) holds d^{(j+1)}_0..d_{n-2-j}
// for j <= n-2 and {d^{(n)}_0} for the singular solution.
std::vector<CVec> free_table(const std::vector<LocalSolution>& basis1) {
  const int n = static_cast<int>(basis1.size());
  std::vector<CVec> tab(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    const int count = (j <= n - 1) ? n - j : 1;
    const CVec& c = basis1[static_cast<std::size_t>(j - 1)].coeffs;
    if (static_cast<int>(c.size()) < count) {
      throw Error("basis truncation order too small for the d-table");
    }
    tab[static_cast<std::size_t>(j - 1)] =
        CVec(c.begin(), c.begin() + count);
  }
  return tab;
}

// The induced d-table matrix D'_i: original table convolved with the
// (1-t)^(beta_i - 1) series; i = 0 gives D itself.
Eigen::MatrixXcd induced_d_matrix(const std::vector<CVec>& tab,
                                  const ParameterSet& p, int i) {
  const int n = static_cast<int>(tab.size());
  const CVec bc = (i == 0)
                      ? CVec{Complex(1.0)}
                      : binomial_series(p.beta[static_cast<std::size_t>(i - 1)] - 1.0,
                                        n - 1);
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 1; j <= n - 1; ++j) {
    for (int k = j; k <= n - 1; ++k) {
      Complex sum(0.0);
      const int top = std::min<int>(k - j, static_cast<int>(bc.size()) - 1);
      for (int r = 0; r <= top; ++r) {
        sum += bc[static_cast<std::size_t>(r)] *
               tab[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - j - r)];
      }
      D(k - 1, j - 1) = sum;
    }
  }
  D(n - 1, n - 1) = tab[static_cast<std::size_t>(n - 1)][0];
  return D;
}

// Forward substitution for the triangular-plus-last-row structure, with
// first-order error propagation.
CVec solve_lower(const Eigen::MatrixXcd& D, const CVec& v,
                 const std::vector<double>& verr, std::vector<double>* cerr) {
  const int n = static_cast<int>(v.size());
  CVec c(static_cast<std::size_t>(n));
  if (cerr) cerr->assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n - 1; ++i) {
    Complex acc = v[static_cast<std::size_t>(i - 1)];
    double e = verr.empty() ? 0.0 : verr[static_cast<std::size_t>(i - 1)];
    for (int k = 1; k < i; ++k) {
      acc -= D(i - 1, k - 1) * c[static_cast<std::size_t>(k - 1)];
      if (cerr)
        e += std::abs(D(i - 1, k - 1)) * (*cerr)[static_cast<std::size_t>(k - 1)];
    }
    const Complex d = D(i - 1, i - 1);
    if (std::abs(d) == 0.0) throw SingularD("zero diagonal in d-table solve");
    c[static_cast<std::size_t>(i - 1)] = acc / d;
    if (cerr) (*cerr)[static_cast<std::size_t>(i - 1)] = e / std::abs(d);
  }
  const Complex dn = D(n - 1, n - 1);
  if (std::abs(dn) == 0.0) throw SingularD("zero d_0^(n) in d-table solve");
  c[static_cast<std::size_t>(n - 1)] = v[static_cast<std::size_t>(n - 1)] / dn;
  if (cerr)
    (*cerr)[static_cast<std::size_t>(n - 1)] =
        (verr.empty() ? 0.0 : verr[static_cast<std::size_t>(n - 1)]) / std::abs(dn);
  return c;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::theorem: return "theorem";
    case Method::column_shift: return "column_shift";
    case Method::oracle: return "oracle";
    case Method::asymptotic: return "asymptotic";
  }
  return "unknown";
}

DMatrix build_D(const std::vector<LocalSolution>& basis1) {
  const std::vector<CVec> tab = free_table(basis1);
  const int n = static_cast<int>(basis1.size());
  DMatrix D;
  D.entries = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 1; j <= n - 1; ++j) {
    for (int k = j; k <= n - 1; ++k) {
      D.entries(k - 1, j - 1) =
          tab[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - j)];
    }
  }
  D.entries(n - 1, n - 1) = tab[static_cast<std::size_t>(n - 1)][0];
  for (int i = 0; i < n; ++i) {
    if (std::abs(D.entries(i, i)) == 0.0) {
      throw SingularD("build_D: diagonal entry " + std::to_string(i + 1) +
                      " vanishes");
    }
  }
  return D;
}

Eigen::MatrixXcd build_P(const ParameterSet& p, const UnitSeriesOptions& opt,
                         Eigen::MatrixXd* error) {
  p.require_nonresonant();
  check_theorem_hypothesis(p);
  const int n = p.n;
  Eigen::MatrixXcd P(n, n);
  if (error) *error = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const ParameterSet q = (j == 0) ? p : shifted_raw(p, j);
    std::vector<double> err;
    CVec v;
    try {
      v = p_column(q, opt, &err);
    } catch (const PoleError& e) {
      throw PoleError("build_P column " + std::to_string(j + 1) + ": " +
                      e.what());
    }
    for (int i = 0; i < n; ++i) {
      P(i, j) = v[static_cast<std::size_t>(i)];
      if (error) (*error)(i, j) = err[static_cast<std::size_t>(i)];
    }
  }
  return P;
}

std::vector<CVec> basis_d_table(const std::vector<LocalSolution>& basis1) {
  return free_table(basis1);
}

ConnectionMatrix connection_from_P(const ParameterSet& p,
                                   const std::vector<CVec>& d_table,
                                   const Eigen::MatrixXcd& P,
                                   const Eigen::MatrixXd& P_error) {
  const int n = p.n;
  ConnectionMatrix cm;
  cm.method = Method::theorem;
  cm.normalization = d_table;
  cm.entries = Eigen::MatrixXcd(n, n);
  cm.error_estimate = Eigen::MatrixXd::Zero(n, n);

  for (int j = 0; j < n; ++j) {
    const Eigen::MatrixXcd Dj = induced_d_matrix(d_table, p, j);
    CVec v(static_cast<std::size_t>(n));
    std::vector<double> verr(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      v[static_cast<std::size_t>(i)] = P(i, j);
      verr[static_cast<std::size_t>(i)] = P_error(i, j);
    }
    std::vector<double> cerr;
    const CVec col = solve_lower(Dj, v, verr, &cerr);
    for (int i = 0; i < n; ++i) {
      cm.entries(i, j) = col[static_cast<std::size_t>(i)];
      cm.error_estimate(i, j) = cerr[static_cast<std::size_t>(i)];
    }
  }
  return cm;
}

ConnectionMatrix connection_matrix(const ParameterSet& p,
                                   const std::vector<LocalSolution>& basis1,
                                   const UnitSeriesOptions& opt) {
  p.require_nonresonant();
  check_theorem_hypothesis(p);
  Eigen::MatrixXd perr;
  const Eigen::MatrixXcd P = build_P(p, opt, &perr);
  return connection_from_P(p, free_table(basis1), P, perr);
}

CVec first_column(const ParameterSet& p, const std::vector<LocalSolution>& basis1,
                  const UnitSeriesOptions& opt, std::vector<double>* error) {
  p.require_nonresonant();
  check_theorem_hypothesis(p);
  const DMatrix D = build_D(basis1);
  std::vector<double> verr;
  const CVec v = p_column(p, opt, &verr);
  return solve_lower(D.entries, v, verr, error);
}

ParameterSet shift_parameters(const ParameterSet& p, int i) {
  ParameterSet q = shifted_raw(p, i);
  q.require_nonresonant();
  return q;
}

CVec map_shifted_first_column(const ParameterSet& p,
                              const std::vector<LocalSolution>& basis1, int i,
                              const CVec& shifted_column,
                              const std::vector<LocalSolution>& shifted_basis1,
                              std::vector<double>* error) {
  const int n = p.n;
  const std::vector<CVec> tab = free_table(basis1);
  const std::vector<CVec> stab = free_table(shifted_basis1);
  const CVec bc =
      binomial_series(1.0 - p.beta[static_cast<std::size_t>(i - 1)], n - 1);

  // T_kj for the holomorphic block: expand (1-t)^(1-beta_i) times the
  // shifted solution j in the original basis, matching the free orders.
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 1; j <= n - 1; ++j) {
    for (int r = 0; r <= n - 1 - j; ++r) {
      Complex q(0.0);
      for (int u = 0; u <= r; ++u) {
        q += bc[static_cast<std::size_t>(u)] *
             stab[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(r - u)];
      }
      for (int k = j; k < j + r; ++k) {
        q -= T(k - 1, j - 1) *
             tab[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j + r - k)];
      }
      T(j + r - 1, j - 1) = q / tab[static_cast<std::size_t>(j + r - 1)][0];
    }
  }
  T(n - 1, n - 1) = stab[static_cast<std::size_t>(n - 1)][0] /
                    tab[static_cast<std::size_t>(n - 1)][0];

  CVec out(static_cast<std::size_t>(n), Complex(0.0));
  if (error && error->size() != static_cast<std::size_t>(n)) {
    // keep incoming per-entry errors if provided, else zeros
    error->assign(static_cast<std::size_t>(n), 0.0);
  }
  std::vector<double> eout(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      out[static_cast<std::size_t>(k)] +=
          T(k, j) * shifted_column[static_cast<std::size_t>(j)];
      if (error)
        eout[static_cast<std::size_t>(k)] +=
            std::abs(T(k, j)) * (*error)[static_cast<std::size_t>(j)];
    }
  }
  if (error) *error = eout;
  return out;
}

CVec column_via_shift(const ParameterSet& p,
                      const std::vector<LocalSolution>& basis1, int i,
                      const UnitSeriesOptions& opt, std::vector<double>* error) {
  if (i < 1 || i > p.n - 1) {
    throw Error("column_via_shift: shift index out of range");
  }
  const ParameterSet q = shift_parameters(p, i);
  if (q.beta_n.real() >= -static_cast<double>(q.n) + 2.0) {
    throw DivergentAtOne(
        "column_via_shift: shifted set fails Re beta_n < -n+2; the direct "
        "theorem formula is still available");
  }
  const std::vector<LocalSolution> sbasis = local_basis_at_one(q, q.n + 2);
  std::vector<double> cerr;
  const CVec c = first_column(q, sbasis, opt, &cerr);
  if (error) *error = cerr;
  return map_shifted_first_column(p, basis1, i, c, sbasis, error);
}

}  // namespace hyperconnect
