#include "mlephase/rng.hpp"

#include <stdexcept>

namespace mlephase {

std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngSeed RngSeed::substream(std::initializer_list<std::uint64_t> keys) const
{
  std::uint64_t h = mix64(stream ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t k : keys)
    h = mix64(h ^ mix64(k));
  return RngSeed{seed, h};
}

Engine make_engine(const RngSeed& rng)
{
  std::seed_seq seq{static_cast<std::uint32_t>(rng.seed), static_cast<std::uint32_t>(rng.seed >> 32),
                    static_cast<std::uint32_t>(rng.stream), static_cast<std::uint32_t>(rng.stream >> 32)};
  return Engine(seq);
}

YVSample sample_yv(const ModelParams& params, Engine& engine, Eigen::Index n)
{
  if (n < 1)
    throw std::invalid_argument("sample_yv: n must be at least 1");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  YVSample out{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = normal(engine);
    const double y = unif(engine) < sigmoid(params.beta0() + params.gamma0() * x) ? 1.0 : -1.0;
    out.y[i] = y;
    out.v[i] = y * x;
  }
  return out;
}

YVSample sample_yv(const ModelParams& params, const RngSeed& rng, Eigen::Index n)
{
  Engine engine = make_engine(rng);
  return sample_yv(params, engine, n);
}

}  // namespace mlephase
