#include "mlephase/phase_sim.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>

#include "mlephase/parallel.hpp"

namespace mlephase {

unsigned default_workers()
{
  if (const char* env = std::getenv("MLE_PHASE_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

long dimension_for(double kappa, long n) { return std::lround(kappa * static_cast<double>(n)); }

void GridSpec::validate() const
{
  if (n < 3)
    throw std::invalid_argument("grid: n must be at least 3");
  if (replicates < 1)
    throw std::invalid_argument("grid: replicates must be at least 1");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("grid: rho must lie in [0, 1]");
  if (kappa_grid.empty() || gamma_grid.empty())
    throw std::invalid_argument("grid: kappa and gamma grids must be nonempty");
  for (double kappa : kappa_grid) {
    if (!(kappa > 0.0 && kappa < 1.0))
      throw std::invalid_argument("grid: kappa must lie in (0, 1)");
    const long p = dimension_for(kappa, n);
    if (p < 1 || p >= n - 1)
      throw std::invalid_argument("grid: kappa " + std::to_string(kappa) + " gives p = " + std::to_string(p) +
                                  ", need 1 <= p < n - 1");
  }
  for (double gamma : gamma_grid)
    if (!std::isfinite(gamma) || gamma < 0.0)
      throw std::invalid_argument("grid: gamma values must be finite and nonnegative");
}

namespace {

SeparationOptions separation_options(bool fit_intercept)
{
  SeparationOptions opts;
  opts.fit_intercept = fit_intercept;
  return opts;
}

std::vector<double> equispaced(double first, double step, int count)
{
  std::vector<double> out;
  for (int k = 0; k < count; ++k)
    out.push_back(first + step * k);
  return out;
}

}  // namespace

GridSpec desk_grid()
{
  GridSpec spec;
  spec.kappa_grid = equispaced(0.05, 0.05, 12);
  spec.gamma_grid = equispaced(0.0, 1.0, 11);
  return spec;
}

GridSpec paper_grid()
{
  GridSpec spec = desk_grid();
  spec.n = 4000;
  spec.replicates = 50;
  return spec;
}

Dataset simulate_dataset(const ModelParams& params, long n, long p, const RngSeed& rng)
{
  if (n < 1 || p < 1)
    throw std::invalid_argument("simulate_dataset: need n >= 1 and p >= 1");
  Engine engine = make_engine(rng);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;

  const double coef = params.gamma0() / std::sqrt(static_cast<double>(p));
  Dataset data;
  data.x.resize(n, p);
  data.y.resize(n);
  for (long i = 0; i < n; ++i) {
    double lin = params.beta0();
    for (long j = 0; j < p; ++j) {
      const double v = normal(engine);
      data.x(i, j) = v;
      lin += coef * v;
    }
    data.y[i] = unif(engine) < sigmoid(lin) ? 1.0 : -1.0;
  }
  data.meta = DatasetMeta{params, rng, static_cast<double>(p) / static_cast<double>(n)};
  return data;
}

CellEstimate estimate_cell(const ModelParams& params, double kappa, long n, long replicates, bool fit_intercept,
                           const RngSeed& cell_seed, unsigned workers)
{
  const long p = dimension_for(kappa, n);
  if (p < 1)
    throw std::invalid_argument("estimate_cell: round(kappa n) must be at least 1");
  if (replicates < 1)
    throw std::invalid_argument("estimate_cell: replicates must be at least 1");

  std::vector<SeparabilityVerdict> verdicts(static_cast<std::size_t>(replicates));
  parallel_for(verdicts.size(), workers, [&](std::size_t r) {
    const Dataset data = simulate_dataset(params, n, p, cell_seed.substream({r}));
    verdicts[r] = check_separation(data, separation_options(fit_intercept));
  });

  CellEstimate out;
  for (const auto& v : verdicts) {
    if (v.status == LpStatus::IterationLimit)
      ++out.failures;
    else if (!v.separated)
      ++out.exists_count;
  }
  out.p_hat = static_cast<double>(out.exists_count) / static_cast<double>(replicates);
  return out;
}

RngSeed cell_seed(const RngSeed& base, std::size_t gamma_row, std::size_t kappa_col)
{
  return base.substream({gamma_row, kappa_col});
}

PhaseDiagram run_phase_diagram(const GridSpec& spec, unsigned workers)
{
  spec.validate();
  const std::size_t rows = spec.gamma_grid.size();
  const std::size_t cols = spec.kappa_grid.size();
  const auto reps = static_cast<std::size_t>(spec.replicates);

  // One work item per (cell, replicate) so large cells do not serialize the pool.
  std::vector<LpStatus> status(rows * cols * reps);
  std::vector<char> exists(rows * cols * reps, 0);
  parallel_for(status.size(), workers, [&](std::size_t item) {
    const std::size_t cell = item / reps;
    const std::size_t r = item % reps;
    const std::size_t row = cell / cols;
    const std::size_t col = cell % cols;
    const ModelParams params = ModelParams::from_polar(spec.rho, spec.gamma_grid[row]);
    const long p = dimension_for(spec.kappa_grid[col], spec.n);
    const Dataset data = simulate_dataset(params, spec.n, p, cell_seed(spec.base_seed, row, col).substream({r}));
    const SeparabilityVerdict v = check_separation(data, separation_options(spec.fit_intercept));
    status[item] = v.status;
    exists[item] = v.status != LpStatus::IterationLimit && !v.separated;
  });

  PhaseDiagram diagram;
  diagram.spec = spec;
  diagram.cells.reserve(rows * cols);
  for (std::size_t cell = 0; cell < rows * cols; ++cell) {
    CellResult c;
    c.gamma = spec.gamma_grid[cell / cols];
    c.kappa = spec.kappa_grid[cell % cols];
    c.replicates = spec.replicates;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::size_t item = cell * reps + r;
      c.failures += status[item] == LpStatus::IterationLimit;
      c.exists_count += exists[item];
    }
    c.p_hat = static_cast<double>(c.exists_count) / static_cast<double>(c.replicates);
    diagram.cells.push_back(c);
  }
  return diagram;
}

}  // namespace mlephase
