#pragma once

#include <cstddef>
#include <vector>

#include "mlephase/prob.hpp"
#include "mlephase/rng.hpp"
#include "mlephase/separability.hpp"

namespace mlephase {

/// Grid of (kappa, gamma) cells. gamma is split as beta0 = rho gamma,
/// gamma0 = sqrt(1 - rho^2) gamma.
struct GridSpec
{
  long n = 400;
  std::vector<double> kappa_grid;
  std::vector<double> gamma_grid;
  double rho = 0.0;
  long replicates = 20;
  bool fit_intercept = true;
  RngSeed base_seed;

  /// Throws std::invalid_argument unless every kappa gives 1 <= round(kappa n) < n - 1,
  /// gammas are finite and nonnegative, rho is in [0,1] and replicates >= 1.
  void validate() const;
};

/// Equispaced grid used by default: kappa 0.05..0.6 by 0.05, gamma 0..10 by 1, n = 400, 20 replicates.
GridSpec desk_grid();
/// Same grid at n = 4000 with 50 replicates.
GridSpec paper_grid();

struct CellResult
{
  double kappa = 0.0;
  double gamma = 0.0;
  long replicates = 0;
  long exists_count = 0;
  long failures = 0;  // replicates whose LP hit the iteration limit
  double p_hat = 0.0; // exists_count / replicates
};

struct PhaseDiagram
{
  GridSpec spec;
  /// Row-major over (gamma row, kappa column).
  std::vector<CellResult> cells;

  const CellResult& at(std::size_t gamma_row, std::size_t kappa_col) const
  {
    return cells[gamma_row * spec.kappa_grid.size() + kappa_col];
  }
};

/// p = round(kappa n).
long dimension_for(double kappa, long n);

/// x_i ~ N(0, I_p), beta with equal positive entries and ||beta|| = gamma0,
/// P(y_i = 1) = sigmoid(beta0 + x_i'beta).
Dataset simulate_dataset(const ModelParams& params, long n, long p, const RngSeed& rng);

struct CellEstimate
{
  long exists_count = 0;
  long failures = 0;
  double p_hat = 0.0;
};

/// Replicate r draws from cell_seed.substream({r}). The MLE exists iff the data are not separated.
CellEstimate estimate_cell(const ModelParams& params, double kappa, long n, long replicates, bool fit_intercept,
                           const RngSeed& cell_seed, unsigned workers = 1);

/// Seed for cell (gamma_row, kappa_col): base.substream({gamma_row, kappa_col}).
RngSeed cell_seed(const RngSeed& base, std::size_t gamma_row, std::size_t kappa_col);

/// Fills every cell; output is independent of worker count and scheduling.
PhaseDiagram run_phase_diagram(const GridSpec& spec, unsigned workers = 1);

}  // namespace mlephase
