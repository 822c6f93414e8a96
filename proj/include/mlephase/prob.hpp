#pragma once

#include <cmath>

namespace mlephase {

/// Scalars that parameterize the logistic model: intercept beta0 and the
/// standard deviation gamma0 of the linear predictor x'beta.
class ModelParams
{
 public:
  /// Throws std::invalid_argument if either value is non-finite or gamma0 < 0.
  /// An infinite gamma0 is not representable; pass a large finite value.
  ModelParams(double beta0, double gamma0);

  double beta0() const { return beta0_; }
  double gamma0() const { return gamma0_; }
  /// Overall signal strength sqrt(beta0^2 + gamma0^2).
  double gamma() const { return gamma_; }

  /// beta0 = rho * gamma, gamma0 = sqrt(1 - rho^2) * gamma.
  static ModelParams from_polar(double rho, double gamma);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double beta0_;
  double gamma0_;
  double gamma_;
};

/// Logistic function e^t / (1 + e^t). Saturates without overflow.
double sigmoid(double t);

double normal_pdf(double t);
double normal_cdf(double t);

/// psi(s) = E (s - Z)_+^2 for Z ~ N(0,1), in closed form
/// (s^2 + 1) Phi(s) + s phi(s).
double psi(double s);
/// psi'(s) = 2 (s Phi(s) + phi(s)).
double psi_prime(double s);
/// psi''(s) = 2 Phi(s).
double psi_second(double s);

}  // namespace mlephase
