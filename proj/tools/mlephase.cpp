// mlephase: boundary curves, simulated phase diagrams, separability checks
// and conic-geometry estimators from the command line.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlephase/boundary.hpp"
#include "mlephase/cone_geom.hpp"
#include "mlephase/parallel.hpp"
#include "mlephase/phase_sim.hpp"
#include "mlephase/report.hpp"
#include "mlephase/separability.hpp"

namespace {

using namespace mlephase;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitSeparated = 3;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::vector<double> linspace(double lo, double hi, long steps)
{
  if (steps < 1)
    throw UsageError("--steps must be >= 1");
  if (!(lo <= hi))
    throw UsageError("empty range: min > max");
  if (steps == 1)
    return {lo};
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  out.back() = hi;
  return out;
}

void emit(const std::optional<std::string>& path, const std::string& content)
{
  if (path)
    write_file_atomic(*path, content);
  else
    std::cout << content;
}

unsigned resolve_workers(long flag)
{
  if (flag < 0)
    throw UsageError("--workers must be >= 0");
  return flag == 0 ? default_workers() : static_cast<unsigned>(flag);
}

ModelParams model_params(double beta0, double gamma0)
{
  try {
    return ModelParams(beta0, gamma0);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- boundary

struct BoundaryArgs
{
  std::optional<double> rho;
  double gamma_min = 0.0;
  double gamma_max = 10.0;
  long steps = 101;
  bool prob_axis = false;
  double tol = kDefaultBoundaryTol;
  std::string format = "csv";
  std::optional<std::string> output;
};

int run_boundary(const BoundaryArgs& a)
{
  if (!a.rho)
    throw UsageError("--rho is required");
  if (!(*a.rho >= 0.0 && *a.rho <= 1.0))
    throw UsageError("--rho must lie in [0, 1]");
  if (!(a.gamma_min >= 0.0) || !std::isfinite(a.gamma_max))
    throw UsageError("gamma range must be finite and nonnegative");
  if (!(a.tol > 0.0))
    throw UsageError("--tol must be positive");

  CurveSpec spec{*a.rho, linspace(a.gamma_min, a.gamma_max, a.steps)};
  const auto curve = boundary_curve(spec, a.tol);

  if (a.format == "json")
    emit(a.output, boundary_json(spec, curve).dump(2) + "\n");
  else
    emit(a.output, boundary_csv(curve, a.prob_axis));

  for (const auto& pt : curve)
    if (!pt.solution.converged)
      return kExitPartial;
  return kExitOk;
}

// ----------------------------------------------------------- phase-diagram

struct DiagramArgs
{
  long n = 0;
  long replicates = 0;
  double rho = 0.0;
  std::vector<double> kappas;
  std::vector<double> gammas;
  bool paper_scale = false;
  bool no_intercept = false;
  std::uint64_t seed = 1;
  long workers = 0;
  std::string format = "csv";
  std::optional<std::string> output;
};

std::vector<CurvePoint> theory_curve(const GridSpec& spec)
{
  double lo = spec.gamma_grid.front();
  double hi = spec.gamma_grid.front();
  for (double g : spec.gamma_grid) {
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  return boundary_curve({spec.rho, linspace(lo, hi, hi > lo ? 201 : 1)});
}

int run_diagram(const DiagramArgs& a)
{
  GridSpec spec = a.paper_scale ? paper_grid() : desk_grid();
  if (a.n > 0)
    spec.n = a.n;
  if (a.replicates > 0)
    spec.replicates = a.replicates;
  if (!a.kappas.empty())
    spec.kappa_grid = a.kappas;
  if (!a.gammas.empty())
    spec.gamma_grid = a.gammas;
  spec.rho = a.rho;
  spec.fit_intercept = !a.no_intercept;
  spec.base_seed = RngSeed{a.seed, 0};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const unsigned workers = resolve_workers(a.workers);

  const PhaseDiagram diagram = run_phase_diagram(spec, workers);
  if (a.format == "json")
    emit(a.output, diagram_json(diagram).dump(2) + "\n");
  else if (a.format == "svg")
    emit(a.output, diagram_svg(diagram, theory_curve(spec)));
  else
    emit(a.output, diagram_csv(diagram));

  for (const auto& c : diagram.cells)
    if (c.failures > 0)
      return kExitPartial;
  return kExitOk;
}

// --------------------------------------------------------------- separable

struct SeparableArgs
{
  std::string path;
  bool no_intercept = false;
  double tol = 1e-7;
};

int run_separable(const SeparableArgs& a)
{
  if (!(a.tol > 0.0))
    throw UsageError("--tol must be positive");
  Dataset data;
  try {
    data = read_dataset_csv(a.path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  SeparationOptions opts;
  opts.fit_intercept = !a.no_intercept;
  opts.tol = a.tol;
  const auto verdict = check_separation(data, opts);
  std::cout << to_json(verdict).dump(2) << '\n';
  if (verdict.status == LpStatus::IterationLimit)
    return kExitPartial;
  return verdict.separated ? kExitSeparated : kExitOk;
}

// -------------------------------------------------------- qn / statdim / check

struct ModelArgs
{
  double beta0 = 0.0;
  double gamma0 = 0.0;
  long n = 1000;
  long trials = 10;
  std::uint64_t seed = 1;
  long workers = 0;
  std::optional<std::string> output;
};

void add_model_flags(CLI::App* cmd, ModelArgs& a)
{
  cmd->add_option("--beta0", a.beta0, "Intercept beta0");
  cmd->add_option("--gamma0", a.gamma0, "Signal sd gamma0 (>= 0)");
  cmd->add_option("--n", a.n, "Sample size");
  cmd->add_option("--trials", a.trials, "Monte Carlo trials");
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--workers", a.workers, "Worker threads (0: MLE_PHASE_WORKERS or all cores)");
  cmd->add_option("-o,--output", a.output, "Output file (default stdout)");
}

void check_counts(const ModelArgs& a, long min_n)
{
  if (a.n < min_n)
    throw UsageError("--n must be >= " + std::to_string(min_n));
  if (a.trials < 1)
    throw UsageError("--trials must be >= 1");
}

int run_qn(const ModelArgs& a, double tol)
{
  check_counts(a, 2);
  const auto est = estimate_qn(model_params(a.beta0, a.gamma0), a.n, a.trials, RngSeed{a.seed, 0}, tol,
                               resolve_workers(a.workers));
  auto doc = to_json(est);
  doc["h_mle"] = h_mle(est.params);
  emit(a.output, doc.dump(2) + "\n");
  return kExitOk;
}

int run_statdim(const ModelArgs& a, const std::string& basis)
{
  check_counts(a, 2);
  const RngSeed rng{a.seed, 0};
  const unsigned workers = resolve_workers(a.workers);
  StatDimEstimate est;
  if (basis == "none") {
    est = statistical_dimension(a.n, a.trials, rng, workers);
  } else if (basis == "ones") {
    est = statistical_dimension(Eigen::MatrixXd::Ones(a.n, 1), a.trials, rng, workers);
  } else {
    const auto yv = sample_yv(model_params(a.beta0, a.gamma0), rng.substream({0}), a.n);
    Eigen::MatrixXd w(a.n, 2);
    w.col(0) = yv.y;
    w.col(1) = yv.v;
    est = statistical_dimension(w, a.trials, rng.substream({1}), workers);
  }
  auto doc = to_json(est);
  doc["basis"] = basis;
  doc["n"] = a.n;
  emit(a.output, doc.dump(2) + "\n");
  return kExitOk;
}

int run_check(const ModelArgs& a, long p, double epsilon)
{
  check_counts(a, 4);
  if (p < 2 || p >= a.n - 1)
    throw UsageError("--p must satisfy 2 <= p < n - 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw UsageError("--epsilon must lie in (0, 1)");
  const auto v = kinematic_predict(model_params(a.beta0, a.gamma0), a.n, p, epsilon, a.trials,
                                   RngSeed{a.seed, 0}, resolve_workers(a.workers));
  emit(a.output, to_json(v).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"MLE existence phase transition for high-dimensional logistic regression"};
  app.set_config("--config", "", "TOML/INI config file; flags override it");
  app.require_subcommand(1);

  BoundaryArgs ba;
  auto* boundary = app.add_subcommand("boundary", "Boundary h_MLE along a polar ray");
  boundary->add_option("--rho", ba.rho, "beta0 = rho gamma, gamma0 = sqrt(1 - rho^2) gamma");
  boundary->add_option("--gamma-min", ba.gamma_min, "Smallest gamma");
  boundary->add_option("--gamma-max", ba.gamma_max, "Largest gamma");
  boundary->add_option("--steps", ba.steps, "Number of equispaced gamma values");
  boundary->add_flag("--prob-axis", ba.prob_axis, "Prepend p_y1 = e^gamma / (1 + e^gamma)");
  boundary->add_option("--tol", ba.tol, "Gradient-norm tolerance");
  boundary->add_option("--format", ba.format)->check(CLI::IsMember({"csv", "json"}));
  boundary->add_option("-o,--output", ba.output, "Output file (default stdout)");

  DiagramArgs da;
  auto* diagram = app.add_subcommand("phase-diagram", "Empirical MLE-existence probabilities on a (kappa, gamma) grid");
  diagram->add_option("--n", da.n, "Sample size (default 400, or 4000 with --paper-scale)");
  diagram->add_option("--replicates", da.replicates, "Replicates per cell (default 20, or 50 with --paper-scale)");
  diagram->add_option("--rho", da.rho, "Split of gamma into beta0 and gamma0")->check(CLI::Range(0.0, 1.0));
  diagram->add_option("--kappa", da.kappas, "kappa grid (default 0.05..0.6 step 0.05)")->delimiter(',');
  diagram->add_option("--gamma", da.gammas, "gamma grid (default 0..10 step 1)")->delimiter(',');
  diagram->add_flag("--paper-scale", da.paper_scale, "n = 4000 with 50 replicates");
  diagram->add_flag("--no-intercept", da.no_intercept, "Separate without b0");
  diagram->add_option("--seed", da.seed, "Base RNG seed");
  diagram->add_option("--workers", da.workers, "Worker threads (0: MLE_PHASE_WORKERS or all cores)");
  diagram->add_option("--format", da.format)->check(CLI::IsMember({"csv", "json", "svg"}));
  diagram->add_option("-o,--output", da.output, "Output file (default stdout)");

  SeparableArgs sa;
  auto* separable = app.add_subcommand("separable", "Separability LP on a CSV dataset (exit 0: MLE exists, 3: separated)");
  separable->add_option("path", sa.path, "CSV with header y,x1,...,xp")->required();
  separable->add_flag("--no-intercept", sa.no_intercept, "Separate without b0");
  separable->add_option("--tol", sa.tol, "Separated iff LP optimum > tol * n");

  ModelArgs qa;
  double qn_tol = kDefaultFitTol;
  auto* qn = app.add_subcommand("qn", "Monte Carlo Q_n estimate");
  add_model_flags(qn, qa);
  qn->add_option("--tol", qn_tol, "Gradient-norm tolerance of the inner fit");

  ModelArgs sda;
  std::string basis = "none";
  auto* statdim = app.add_subcommand("statdim", "Statistical dimension of W + R^n_+");
  add_model_flags(statdim, sda);
  statdim->add_option("--basis", basis, "W: none, ones, or yv (span of sampled Y, V)")
      ->check(CLI::IsMember({"none", "ones", "yv"}));

  ModelArgs ca;
  long p = 0;
  double epsilon = kDefaultEpsilon;
  auto* check = app.add_subcommand("check", "Kinematic-formula prediction of MLE existence");
  add_model_flags(check, ca);
  check->add_option("--p", p, "Number of covariates")->required();
  check->add_option("--epsilon", epsilon, "Failure probability of the prediction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*boundary)
      return run_boundary(ba);
    if (*diagram)
      return run_diagram(da);
    if (*separable)
      return run_separable(sa);
    if (*qn)
      return run_qn(qa, qn_tol);
    if (*statdim)
      return run_statdim(sda, basis);
    if (*check)
      return run_check(ca, p, epsilon);
  } catch (const UsageError& e) {
    const auto chosen = app.get_subcommands();
    std::cerr << "error: " << e.what() << "\n\n" << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
