#include "mlephase/prob.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace mlephase {

ModelParams::ModelParams(double beta0, double gamma0)
    : beta0_(beta0)
    , gamma0_(gamma0)
    , gamma_(std::hypot(beta0, gamma0))
{
  if (!std::isfinite(beta0) || !std::isfinite(gamma0))
    throw std::invalid_argument("ModelParams: beta0 and gamma0 must be finite");
  if (gamma0 < 0.0)
    throw std::invalid_argument("ModelParams: gamma0 must be nonnegative");
}

ModelParams ModelParams::from_polar(double rho, double gamma)
{
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("ModelParams: rho must lie in [0, 1]");
  if (!(gamma >= 0.0))
    throw std::invalid_argument("ModelParams: gamma must be nonnegative");
  return ModelParams(rho * gamma, std::sqrt(std::max(0.0, 1.0 - rho * rho)) * gamma);
}

double sigmoid(double t)
{
  if (t >= 0.0)
    return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double normal_pdf(double t)
{
  constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  return inv_sqrt_2pi * std::exp(-0.5 * t * t);
}

double normal_cdf(double t)
{
  // erfc keeps full relative precision in the lower tail.
  return 0.5 * std::erfc(-t * std::numbers::sqrt2 * 0.5);
}

// The closed forms cancel for s << 0 (relative loss grows like s^4), which is
// harmless in absolute terms; clamp so tiny negative round-off never leaks out.
double psi(double s)
{
  const double value = (s * s + 1.0) * normal_cdf(s) + s * normal_pdf(s);
  return std::max(value, 0.0);
}

double psi_prime(double s)
{
  return std::max(2.0 * (s * normal_cdf(s) + normal_pdf(s)), 0.0);
}

double psi_second(double s) { return 2.0 * normal_cdf(s); }

}  // namespace mlephase
