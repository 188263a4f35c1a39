#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>

#include "hyperconnect/connection.hpp"
#include "hyperconnect/frobenius.hpp"
#include "hyperconnect/params.hpp"
#include "hyperconnect/types.hpp"

namespace hyperconnect {

/// Chebyshev-spaced points on [lo, hi].
CVec chebyshev_points(int count, double lo = 0.35, double hi = 0.65);

struct OracleResult {
  Eigen::MatrixXcd C;
  double condition_number = 0.0;
};

/// Pointwise recovery of the connection matrix: for each j solve the
/// n x n system [y_k^[1](x_p)] c = [y_j^[0](x_p)] over the sample points.
/// Throws IllConditioned when the sample matrix condition exceeds 1e10.
OracleResult oracle_connection_coefficients(
    const ParameterSet& p, const std::vector<LocalSolution>& basis0,
    const std::vector<LocalSolution>& basis1, const CVec& sample_points);

/// max over points and basis index j of |y_j^[0](x) - sum_k C(k,j) y_k^[1](x)|.
double overlap_residual(const Eigen::MatrixXcd& C,
                        const std::vector<LocalSolution>& basis0,
                        const std::vector<LocalSolution>& basis1,
                        const CVec& points);

/// Residual of the operator applied to the truncated series, evaluated
/// analytically term by term; one (order, max-residual) row per M.
std::vector<std::pair<int, double>> ode_residual(const LocalSolution& sol,
                                                 const DeltaOperator& op,
                                                 const CVec& points,
                                                 const std::vector<int>& orders);

struct VerifyOptions {
  double overlap_tol = 1e-8;
  double oracle_tol = 1e-7;
  double decay_factor = 4.0;
  double condition_max = 1e10;
};

struct VerificationReport {
  double max_overlap_residual = 0.0;
  std::vector<double> oracle_column_delta;
  std::vector<std::pair<int, double>> ode_residual_decay;
  double condition_number = 0.0;
  bool pass = false;
  std::vector<std::string> details;
};

/// Full diagnostic pass for a computed connection matrix: oracle
/// comparison, overlap residual on 20 fresh Chebyshev points, and
/// operator-residual decay of every basis solution.
VerificationReport run_verification(const ParameterSet& p,
                                    const std::vector<LocalSolution>& basis0,
                                    const std::vector<LocalSolution>& basis1,
                                    const Eigen::MatrixXcd& C,
                                    const VerifyOptions& opt = {},
                                    const CVec* sample_points = nullptr);

}  // namespace hyperconnect
