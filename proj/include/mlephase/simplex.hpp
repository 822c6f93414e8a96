#pragma once

#include <Eigen/Core>

namespace mlephase {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class SimplexStatus
{
  Optimal,
  Unbounded,
  IterationLimit,
};

struct SimplexOptions
{
  double optimality_tol = 1e-9;   // reduced-cost threshold
  double pivot_tol = 1e-9;        // smallest admissible pivot element
  long max_iterations = 0;        // 0: 50 (n + m) + 1000
  int refactor_interval = 0;      // 0: max(64, m / 2)
  int degenerate_streak = 50;     // degenerate pivots before switching to Bland's rule
};

struct NonnegL1Result
{
  SimplexStatus status = SimplexStatus::Optimal;
  double value = 0.0;             // ||rows' mu + g||_1 at the returned mu
  Eigen::VectorXd mu;             // n, nonnegative
  Eigen::VectorXd multipliers;    // m, simplex multipliers of the equality rows
  long iterations = 0;
  long bland_pivots = 0;
};

/// Solves   minimize ||rows' mu + g||_1   subject to mu >= 0
/// where rows is n x m (row i is the i-th generator in R^m), by a dense
/// revised simplex on the standard form
///   rows' mu - r_plus + r_minus = -g,  mu, r_plus, r_minus >= 0,  cost 1'(r_plus + r_minus).
/// Starts from the all-residual basis, which is always feasible. Dantzig
/// pricing; Bland's rule after a run of degenerate pivots guarantees termination.
///
/// At optimality the multipliers pi satisfy |pi_j| <= 1 and rows pi <= 0
/// (up to tolerance), and -g' pi equals the optimal value.
NonnegL1Result solve_nonneg_l1(const RowMatrix& rows, const Eigen::VectorXd& g, const SimplexOptions& opts = {});

}  // namespace mlephase
