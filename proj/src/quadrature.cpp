#include "mlephase/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mlephase {

namespace {

// Golub-Welsch for a symmetric Jacobi matrix with zero diagonal.
QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, double mass)
{
  const Eigen::Index n = offdiag.size() + 1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(Eigen::VectorXd::Zero(n), offdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("quadrature: eigen decomposition failed");

  const auto order = static_cast<std::size_t>(n);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes[k] = solver.eigenvalues()[k];
    rule.weights[k] = mass * v0 * v0;
  }

  // Both weight functions are even: symmetrize so odd moments vanish exactly.
  for (std::size_t k = 0; k < order / 2; ++k) {
    const std::size_t m = order - 1 - k;
    const double x = 0.5 * (rule.nodes[m] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[m]);
    rule.nodes[k] = -x;
    rule.nodes[m] = x;
    rule.weights[k] = w;
    rule.weights[m] = w;
  }
  if (order % 2 == 1)
    rule.nodes[order / 2] = 0.0;
  return rule;
}

void normalize(QuadratureRule& rule)
{
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (double& w : rule.weights)
    w /= total;
}

}  // namespace

QuadratureRule gauss_hermite_rule(std::size_t order)
{
  if (order == 0)
    throw std::invalid_argument("gauss_hermite_rule: order must be positive");
  // Monic probabilists' Hermite recurrence He_{k+1} = x He_k - k He_{k-1}.
  Eigen::VectorXd sub(static_cast<Eigen::Index>(order) - 1);
  for (Eigen::Index k = 0; k < sub.size(); ++k)
    sub[k] = std::sqrt(static_cast<double>(k + 1));
  QuadratureRule rule = golub_welsch(sub, 1.0);
  normalize(rule);
  return rule;
}

QuadratureRule gauss_legendre_rule(std::size_t order)
{
  if (order == 0)
    throw std::invalid_argument("gauss_legendre_rule: order must be positive");
  Eigen::VectorXd sub(static_cast<Eigen::Index>(order) - 1);
  for (Eigen::Index k = 0; k < sub.size(); ++k) {
    const double j = static_cast<double>(k + 1);
    sub[k] = j / std::sqrt(4.0 * j * j - 1.0);
  }
  return golub_welsch(sub, 2.0);
}

QuadratureRule graded_rule(const ModelParams& params, std::size_t points_per_panel)
{
  constexpr double half_width = 12.0;
  const double finest = 1.0 / (64.0 * (1.0 + params.gamma()));

  const double center = params.gamma0() > 0.0
                            ? std::clamp(-params.beta0() / params.gamma0(), -half_width, half_width)
                            : 0.0;

  std::vector<double> breaks{-half_width, half_width};
  for (double anchor : {0.0, center}) {
    breaks.push_back(anchor);
    for (double d = half_width; d >= finest; d *= 0.5) {
      breaks.push_back(anchor - d);
      breaks.push_back(anchor + d);
    }
  }
  std::erase_if(breaks, [&](double b) { return b < -half_width || b > half_width; });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [&](double a, double b) { return b - a < 0.25 * finest; }),
               breaks.end());
  breaks.back() = half_width;

  const QuadratureRule base = gauss_legendre_rule(points_per_panel);
  QuadratureRule rule;
  rule.nodes.reserve(base.order() * breaks.size());
  rule.weights.reserve(base.order() * breaks.size());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    const double half = 0.5 * (breaks[i + 1] - breaks[i]);
    for (std::size_t k = 0; k < base.order(); ++k) {
      const double x = mid + half * base.nodes[k];
      rule.nodes.push_back(x);
      rule.weights.push_back(half * base.weights[k] * normal_pdf(x));
    }
  }
  normalize(rule);
  return rule;
}

}  // namespace mlephase
