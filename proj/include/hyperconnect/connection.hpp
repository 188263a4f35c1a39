#pragma once

#include <Eigen/Core>
#include <string>

#include "hyperconnect/frobenius.hpp"
#include "hyperconnect/params.hpp"
#include "hyperconnect/types.hpp"

namespace hyperconnect {

enum class Method { theorem, column_shift, oracle, asymptotic };
std::string method_name(Method m);

/// Leading-coefficient matrix of the basis at 1: entry (i,j) = d^{(j)}_{i-j}
/// for j <= i <= n-1, last row (0,...,0,d_0^{(n)}), zeros elsewhere.
struct DMatrix {
  Eigen::MatrixXcd entries;
};

DMatrix build_D(const std::vector<LocalSolution>& basis1);

struct ConnectionMatrix {
  Eigen::MatrixXcd entries;
  Method method = Method::theorem;
  /// The d-table of the basis the matrix refers to (free part).
  std::vector<CVec> normalization;
  Eigen::MatrixXd error_estimate;
};

struct UnitSeriesOptions {
  double tol = 1e-10;
  std::int64_t max_terms = 1'000'000;
};

/// The matrix P of gamma products and unit-argument series values:
/// p_ij = (-1)^(i-1)/(i-1)! (alpha_{j-1})_{i-1}/(beta_{j-1})_{i-1}
///        F(alpha_{j-1}+i-1; beta_{j-1}+i-1; 1)           (i <= n-1)
/// p_nj = Gamma(beta_{j-1}, beta_n) / Gamma(alpha_{j-1}).
/// Requires Re(beta_n) < -n+2.
Eigen::MatrixXcd build_P(const ParameterSet& p, const UnitSeriesOptions& opt = {},
                         Eigen::MatrixXd* error = nullptr);

/// Connection matrix with Y^[0] = Y^[1] C on the overlap. Column i+1 is
/// obtained by solving the induced d-table system D'_i c = (column i+1
/// of P), where D'_0 = D and D'_i carries the (1-t)^(beta_i - 1)
/// convolution that the parameter-shift identity imposes on the basis
/// normalization at 1.
ConnectionMatrix connection_matrix(const ParameterSet& p,
                                   const std::vector<LocalSolution>& basis1,
                                   const UnitSeriesOptions& opt = {});

/// Assembly step of connection_matrix for a precomputed P: solves the
/// induced d-table systems given the free d-table of the basis at 1.
ConnectionMatrix connection_from_P(const ParameterSet& p,
                                   const std::vector<CVec>& d_table,
                                   const Eigen::MatrixXcd& P,
                                   const Eigen::MatrixXd& P_error);

/// Free d-table of a basis at 1 (the coefficients the D matrix reads).
std::vector<CVec> basis_d_table(const std::vector<LocalSolution>& basis1);

/// Connection coefficients of y_1^[0] alone: D^{-1} times the first
/// column of P. Equals column 1 of connection_matrix.
CVec first_column(const ParameterSet& p, const std::vector<LocalSolution>& basis1,
                  const UnitSeriesOptions& opt = {},
                  std::vector<double>* error = nullptr);

/// Shifted tuples (alpha_i; beta_i); throws AssumptionViolated when the
/// shifted set breaks the non-resonance assumption.
ParameterSet shift_parameters(const ParameterSet& p, int i);

/// Express a first-column vector computed in the shifted canonical basis
/// in the original basis: applies the triangular transfer matrix of the
/// identity x^{1-beta_i} y_j^{[1]}(alpha_i; x) = sum_k T_kj y_k^{[1]}(alpha_0; x).
CVec map_shifted_first_column(const ParameterSet& p,
                              const std::vector<LocalSolution>& basis1, int i,
                              const CVec& shifted_column,
                              const std::vector<LocalSolution>& shifted_basis1,
                              std::vector<double>* error = nullptr);

/// Column i+1 of the connection matrix via the parameter-shift route:
/// first_column of the shifted set in its own canonical basis, mapped
/// back through the transfer matrix. Cross-checks connection_matrix.
CVec column_via_shift(const ParameterSet& p,
                      const std::vector<LocalSolution>& basis1, int i,
                      const UnitSeriesOptions& opt = {},
                      std::vector<double>* error = nullptr);

}  // namespace hyperconnect
