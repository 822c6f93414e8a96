#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "mlephase/prob.hpp"
#include "mlephase/rng.hpp"
#include "mlephase/simplex.hpp"

namespace mlephase {

struct DatasetMeta
{
  ModelParams params{0.0, 0.0};
  RngSeed seed;
  double kappa = 0.0;
};

/// n x p covariates with labels in {-1, +1}.
struct Dataset
{
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::optional<DatasetMeta> meta;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }

  /// Throws std::invalid_argument unless n, p >= 1, |y_i| = 1, and all entries are finite.
  void validate() const;
};

/// Reads `y,x1,...,xp` CSV with a header row. Labels in {0,1} are mapped to {-1,+1}.
/// Throws std::runtime_error on malformed input.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

enum class LpStatus
{
  Optimal,
  UnboundedTreatedAsSeparated,
  InfeasibleImpossible,
  IterationLimit,
};

const char* to_string(LpStatus status);

struct SeparatingHyperplane
{
  double b0 = 0.0;  // 0 when no intercept is fitted
  Eigen::VectorXd b;
};

struct SeparabilityVerdict
{
  bool separated = false;
  double lp_objective = 0.0;
  std::optional<SeparatingHyperplane> witness;
  LpStatus status = LpStatus::Optimal;
  bool trivial_labels = false;  // all labels equal; decided without the LP
  long iterations = 0;
};

struct SeparationOptions
{
  bool fit_intercept = true;
  /// Separated iff the LP optimum exceeds tol * n.
  double tol = 1e-7;
  SimplexOptions simplex;
};

/// Solves
///   maximize   sum_i y_i (b0 + x_i'b)
///   subject to y_i (b0 + x_i'b) >= 0,  -1 <= b0 <= 1,  -1 <= b <= 1
/// (b0 fixed at 0 without intercept) through its dual
///   minimize_{mu >= 0} || A'(1 + mu) ||_1,   A = [y_i (1, x_i')].
/// The data are completely or quasi-completely separated, so the logistic MLE
/// does not exist, iff the optimum is positive.
SeparabilityVerdict check_separation(const Dataset& data, const SeparationOptions& opts = {});

/// True iff some (b0, b1) != 0 has y_i (b0 + b1 v_i) >= 0 for all i with at
/// least one strict inequality. Decided from class order statistics.
bool check_single_variable_separation(const Eigen::VectorXd& v, const Eigen::VectorXd& y);

}  // namespace mlephase
