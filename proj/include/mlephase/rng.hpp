#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Core>

#include "mlephase/prob.hpp"

namespace mlephase {

/// Seed plus substream id. Every concurrent task gets its own stream, so
/// results never depend on scheduling or worker count.
struct RngSeed
{
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child stream keyed by an ordered list of indices, e.g. {row, col, rep}.
  RngSeed substream(std::initializer_list<std::uint64_t> keys) const;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

using Engine = std::mt19937_64;

/// Engine state is a pure function of (seed, stream).
Engine make_engine(const RngSeed& rng);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

struct YVSample
{
  Eigen::VectorXd y;  // entries in {-1, +1}
  Eigen::VectorXd v;  // y * x
};

/// n i.i.d. draws of (Y, V) = (Y, Y X), X ~ N(0,1), P(Y=1|X) = sigmoid(beta0 + gamma0 X).
YVSample sample_yv(const ModelParams& params, Engine& engine, Eigen::Index n);
YVSample sample_yv(const ModelParams& params, const RngSeed& rng, Eigen::Index n);

}  // namespace mlephase
