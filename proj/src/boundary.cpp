#include "mlephase/boundary.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

namespace mlephase {

BoundaryNotConverged::BoundaryNotConverged(BoundarySolution last)
    : std::runtime_error("boundary solver did not converge (beta0=" + std::to_string(last.params.beta0()) +
                         ", gamma0=" + std::to_string(last.params.gamma0()) + ")")
    , last_(std::move(last))
{
}

QuadratureRule boundary_rule(const ModelParams& params) { return graded_rule(params, 12); }

ObjectiveEval objective(const ModelParams& params, const Eigen::Vector2d& t)
{
  return objective(params, t, boundary_rule(params));
}

ObjectiveEval objective(const ModelParams& params, const Eigen::Vector2d& t, const QuadratureRule& rule)
{
  if (!t.allFinite())
    throw std::invalid_argument("objective: t must be finite");

  ObjectiveEval out;
  out.t = t;
  out.gradient.setZero();
  out.hessian.setZero();

  // Y = +1 contributes at (1, x) with s = t0 + t1 x; Y = -1 at (-1, -x) with s = -(t0 + t1 x).
  for (std::size_t k = 0; k < rule.order(); ++k) {
    const double x = rule.nodes[k];
    const double w = rule.weights[k];
    const double lin = params.beta0() + params.gamma0() * x;
    const double p_pos = w * sigmoid(lin);
    const double p_neg = w * sigmoid(-lin);
    const double s = t[0] + t[1] * x;

    out.value += p_pos * psi(s) + p_neg * psi(-s);
    // d/dt of psi(-s) is -(1, x) psi'(-s), the same vector as (Y, V) = (-1, -x).
    const double g = p_pos * psi_prime(s) - p_neg * psi_prime(-s);
    out.gradient[0] += g;
    out.gradient[1] += g * x;
    const double c = p_pos * psi_second(s) + p_neg * psi_second(-s);
    out.hessian(0, 0) += c;
    out.hessian(0, 1) += c * x;
    out.hessian(1, 1) += c * x * x;
  }
  out.hessian(1, 0) = out.hessian(0, 1);
  return out;
}

namespace {

// Minimizes a smooth strictly convex function of dimension D by damped Newton.
template <int D, class Eval>
BoundarySolution newton(const ModelParams& params, Eval&& eval, double tol)
{
  using Vec = Eigen::Matrix<double, D, 1>;
  constexpr double armijo = 1e-4;
  constexpr int max_halvings = 60;

  Vec t = Vec::Zero();
  auto [f, g, H] = eval(t);

  BoundarySolution sol;
  sol.params = params;
  for (int iter = 0;; ++iter) {
    sol.iterations = iter;
    sol.grad_norm = g.norm();
    if (sol.grad_norm <= tol) {
      sol.converged = true;
      break;
    }
    if (iter == kBoundaryMaxIterations)
      break;

    const Vec step = -H.ldlt().solve(g);
    const double slope = g.dot(step);
    // Once the predicted decrease is at round-off level, comparing function
    // values is meaningless; take the full step (quadratic regime).
    if (-slope <= 1e-14 * (1.0 + std::abs(f))) {
      t += step;
      std::tie(f, g, H) = eval(t);
      continue;
    }
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < max_halvings; ++halving, alpha *= 0.5) {
      const Vec trial = t + alpha * step;
      auto [ft, gt, Ht] = eval(trial);
      if (ft <= f + armijo * alpha * slope) {
        t = trial;
        f = ft;
        g = gt;
        H = Ht;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      break;
  }

  sol.t_star.setZero();
  sol.t_star.template head<D>() = t;
  sol.h = f;
  if (!sol.converged)
    throw BoundaryNotConverged(sol);
  return sol;
}

}  // namespace

BoundarySolution solve_boundary(const ModelParams& params, const QuadratureRule& rule, double tol)
{
  if (!(tol > 0.0))
    throw std::invalid_argument("solve_boundary: tol must be positive");
  return newton<2>(params,
                   [&](const Eigen::Vector2d& t) {
                     const ObjectiveEval e = objective(params, t, rule);
                     return std::tuple{e.value, e.gradient, e.hessian};
                   },
                   tol);
}

BoundarySolution solve_boundary(const ModelParams& params, double tol)
{
  return solve_boundary(params, boundary_rule(params), tol);
}

double h_mle(const ModelParams& params) { return solve_boundary(params).h; }

BoundarySolution solve_boundary_1d(const ModelParams& params, Reduction which, const QuadratureRule& rule,
                                   double tol)
{
  if (!(tol > 0.0))
    throw std::invalid_argument("solve_boundary_1d: tol must be positive");
  if (which == Reduction::YOnly && params.gamma0() != 0.0)
    throw std::invalid_argument("solve_boundary_1d: Y-only reduction requires gamma0 == 0");
  if (which == Reduction::VOnly && params.beta0() != 0.0)
    throw std::invalid_argument("solve_boundary_1d: V-only reduction requires beta0 == 0");

  using Vec1 = Eigen::Matrix<double, 1, 1>;
  auto eval = [&](const Vec1& t) {
    double f = 0.0, g = 0.0, h = 0.0;
    for (std::size_t k = 0; k < rule.order(); ++k) {
      const double x = rule.nodes[k];
      const double lin = params.beta0() + params.gamma0() * x;
      const double p_pos = rule.weights[k] * sigmoid(lin);
      const double p_neg = rule.weights[k] * sigmoid(-lin);
      // Coordinate of (Y, V) kept by the reduction, for Y = +1 and Y = -1.
      const double a_pos = which == Reduction::YOnly ? 1.0 : x;
      const double a_neg = -a_pos;
      const double s_pos = t[0] * a_pos;
      const double s_neg = t[0] * a_neg;
      f += p_pos * psi(s_pos) + p_neg * psi(s_neg);
      g += p_pos * a_pos * psi_prime(s_pos) + p_neg * a_neg * psi_prime(s_neg);
      h += p_pos * a_pos * a_pos * psi_second(s_pos) + p_neg * a_neg * a_neg * psi_second(s_neg);
    }
    return std::tuple{f, Vec1(g), Eigen::Matrix<double, 1, 1>(h)};
  };

  BoundarySolution sol = newton<1>(params, eval, tol);
  if (which == Reduction::VOnly)
    sol.t_star = Eigen::Vector2d(0.0, sol.t_star[0]);
  return sol;
}

BoundarySolution solve_boundary_1d(const ModelParams& params, Reduction which, double tol)
{
  return solve_boundary_1d(params, which, boundary_rule(params), tol);
}

std::vector<CurvePoint> boundary_curve(const CurveSpec& spec, double tol)
{
  if (!(spec.rho >= 0.0 && spec.rho <= 1.0))
    throw std::invalid_argument("boundary_curve: rho must lie in [0, 1]");
  std::vector<CurvePoint> out;
  out.reserve(spec.gammas.size());
  for (double gamma : spec.gammas) {
    if (!std::isfinite(gamma) || gamma < 0.0)
      throw std::invalid_argument("boundary_curve: gamma grid must be finite and nonnegative");
    const ModelParams params = ModelParams::from_polar(spec.rho, gamma);
    CurvePoint point{gamma, {}};
    try {
      point.solution = solve_boundary(params, tol);
    } catch (const BoundaryNotConverged& e) {
      point.solution = e.last();
    }
    out.push_back(point);
  }
  return out;
}

}  // namespace mlephase
