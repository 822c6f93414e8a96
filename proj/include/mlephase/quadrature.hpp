#pragma once

#include <cstddef>
#include <vector>

#include "mlephase/prob.hpp"

namespace mlephase {

/// Nodes and weights for E f(X), X ~ N(0,1): E f(X) ~= sum_k w_k f(x_k).
/// Weights are normalized so the rule integrates 1 exactly.
struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t order() const { return nodes.size(); }

  template <class F>
  double expect(F&& f) const
  {
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
      acc += weights[k] * f(nodes[k]);
    return acc;
  }
};

inline constexpr std::size_t kDefaultQuadratureOrder = 64;

/// Gauss-Hermite rule for the standard normal weight (probabilists' Hermite
/// polynomials), built by Golub-Welsch. Nodes are symmetric about 0.
/// Throws std::invalid_argument for order == 0.
QuadratureRule gauss_hermite_rule(std::size_t order = kDefaultQuadratureOrder);

/// Composite Gauss-Legendre rule against the N(0,1) density on [-12, 12],
/// with panels graded geometrically toward the sigmoid center -beta0/gamma0
/// and toward 0, down to width ~1/(64 (1 + gamma)). Resolves the sharp
/// features that appear for large signal strength, where a fixed
/// Gauss-Hermite rule loses accuracy.
QuadratureRule graded_rule(const ModelParams& params, std::size_t points_per_panel = 16);

/// Gauss-Legendre nodes/weights on [-1, 1] (weights sum to 2).
QuadratureRule gauss_legendre_rule(std::size_t order);

/// E g(Y, V) for (Y, V) ~ (Y, Y X), X ~ N(0,1), P(Y = 1 | X) = sigmoid(beta0 + gamma0 X):
///   E_X[ sigmoid(.) g(1, X) + (1 - sigmoid(.)) g(-1, -X) ].
template <class G>
double yv_quadrature(const ModelParams& params, const QuadratureRule& rule, G&& g)
{
  return rule.expect([&](double x) {
    const double lin = params.beta0() + params.gamma0() * x;
    return sigmoid(lin) * g(1.0, x) + sigmoid(-lin) * g(-1.0, -x);
  });
}

}  // namespace mlephase
