#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mlephase/boundary.hpp"
#include "mlephase/cone_geom.hpp"
#include "mlephase/parallel.hpp"
#include "mlephase/separability.hpp"
#include "oracles.hpp"

using namespace mlephase;

namespace {

Dataset make(std::initializer_list<double> xs, std::initializer_list<double> ys)
{
  Dataset d;
  d.x = Eigen::Map<const Eigen::VectorXd>(xs.begin(), static_cast<Eigen::Index>(xs.size()));
  d.y = Eigen::Map<const Eigen::VectorXd>(ys.begin(), static_cast<Eigen::Index>(ys.size()));
  return d;
}

}  // namespace

TEST_SUITE("cone_geom")
{
  TEST_CASE("all slacks can be made negative")
  {
    const auto fit = empirical_qn(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1), Eigen::Vector2d(10, 10));
    CHECK(fit.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(!fit.unbounded);
  }

  TEST_CASE("constant labels give zero whatever z is")
  {
    // Y = 1 lies in the span, so t0 -> -inf drives every slack negative.
    const Eigen::Vector3d y(1, 1, 1), v(0.5, -0.2, 1.0), z(-3.0, 2.0, -1.0);
    const auto fit = empirical_qn(y, v, z);
    CHECK(fit.value < 1e-20);
    CHECK((fit.theta[0] * y + fit.theta[1] * v - z).maxCoeff() <= 1e-10);
  }

  TEST_CASE("permuting observations leaves Q_n unchanged")
  {
    const long n = 500;
    const auto yv = sample_yv(ModelParams(0.5, 1.5), RngSeed{4, 0}, n);
    auto eng = make_engine(RngSeed{4, 1});
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(n);
    for (long i = 0; i < n; ++i)
      z[i] = normal(eng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), eng);
    Eigen::VectorXd y2(n), v2(n), z2(n);
    for (long i = 0; i < n; ++i) {
      y2[i] = yv.y[perm[i]];
      v2[i] = yv.v[perm[i]];
      z2[i] = z[perm[i]];
    }
    const auto a = empirical_qn(yv.y, yv.v, z);
    const auto b = empirical_qn(y2, v2, z2);
    CHECK(a.converged);
    CHECK(a.grad_norm <= kDefaultFitTol);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
  }

  TEST_CASE("minimizer matches a grid search")
  {
    const long n = 50;
    const auto yv = sample_yv(ModelParams(0.0, 1.0), RngSeed{5, 0}, n);
    auto eng = make_engine(RngSeed{5, 1});
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(n);
    for (long i = 0; i < n; ++i)
      z[i] = normal(eng);
    auto f = [&](double t0, double t1) {
      return (t0 * yv.y + t1 * yv.v - z).cwiseMax(0.0).squaredNorm() / n;
    };
    const auto fit = empirical_qn(yv.y, yv.v, z);
    double best = 1e300;
    for (double t0 = -4; t0 <= 4; t0 += 0.01)
      best = std::min(best, oracle::golden_min([&](double t1) { return f(t0, t1); }, -6, 6, 60).second);
    CHECK(fit.value <= best + 1e-10);
    CHECK(fit.value >= best - 1e-4);
  }

  TEST_CASE("Q_n estimates one half at the null model")
  {
    const auto est = estimate_qn(ModelParams(0.0, 0.0), 10000, 10, RngSeed{6, 0}, kDefaultFitTol, default_workers());
    REQUIRE(est.values.size() == 10);
    for (double v : est.values)
      CHECK(v >= 0.0);
    CHECK(std::abs(est.mean - 0.5) < 4.0 * est.stderr_);
    double ss = 0;
    for (double v : est.values)
      ss += (v - est.mean) * (v - est.mean);
    CHECK(est.stderr_ == doctest::Approx(std::sqrt(ss / 9.0) / std::sqrt(10.0)));
  }

  TEST_CASE("Q_n error shrinks like one over root n")
  {
    const ModelParams p(0.0, 1.0);
    const double h = h_mle(p);
    std::vector<double> rmse;
    const std::vector<long> sizes{500, 2000, 8000};
    for (long n : sizes) {
      const auto est = estimate_qn(p, n, 40, RngSeed{7, std::uint64_t(n)}, kDefaultFitTol, default_workers());
      double ss = 0;
      for (double v : est.values)
        ss += (v - h) * (v - h);
      rmse.push_back(std::sqrt(ss / est.values.size()));
      if (n == 8000)
        CHECK(std::abs(est.mean - h) <= 0.02);
    }
    CHECK(rmse[1] < rmse[0]);
    CHECK(rmse[2] < rmse[1]);
    // Least-squares slope of log rmse against log n, and C fitted with the slope fixed at -1/2.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, log_c = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double x = std::log(double(sizes[i])), y = std::log(rmse[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      log_c += (y + 0.5 * x) / 3;
    }
    const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    const double c = std::exp(log_c);
    MESSAGE("rmse slope " << slope << ", C " << c);
    CHECK(slope > -0.75);
    CHECK(slope < -0.25);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(rmse[i] <= 1.5 * c / std::sqrt(double(sizes[i])));
  }

  TEST_CASE("empty basis gives half the dimension")
  {
    const auto est = statistical_dimension(1000, 2000, RngSeed{8, 0}, default_workers());
    CHECK(std::abs(est.delta_hat - 500.0) < 4.0 * est.stderr_);
    const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(4, -1.5, 1.5);
    CHECK(conic_distance_sq(Eigen::MatrixXd(4, 0), z) == doctest::Approx(1.5 * 1.5 + 0.5 * 0.5));
  }

  TEST_CASE("span of ones against a grid oracle")
  {
    const long n = 100, trials = 2000;
    const auto est = statistical_dimension(Eigen::MatrixXd::Ones(n, 1), trials, RngSeed{9, 0}, default_workers());

    std::mt19937_64 gen(123);
    std::normal_distribution<double> normal;
    double sum = 0, sum_sq = 0;
    Eigen::VectorXd z(n);
    for (long k = 0; k < trials; ++k) {
      for (long i = 0; i < n; ++i)
        z[i] = normal(gen);
      // min over t of ||(t - z)_+||^2 is 0 at t = min z; coarse grid then refine.
      auto g = [&](double t) { return (Eigen::VectorXd::Constant(n, t) - z).cwiseMax(0.0).squaredNorm(); };
      double best_t = -8, best = g(-8);
      for (double t = -8; t <= 8; t += 0.01)
        if (g(t) < best) {
          best = g(t);
          best_t = t;
        }
      const double val = double(n) - oracle::golden_min(g, best_t - 0.01, best_t + 0.01, 60).second;
      sum += val;
      sum_sq += val * val;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
    CHECK(std::abs(est.delta_hat - mean) < 4.0 * std::hypot(se, est.stderr_));
    CHECK(est.delta_hat >= n / 2.0 - 4.0 * est.stderr_);
  }

  TEST_CASE("span of (Y, V) at the null model")
  {
    const long n = 10000;
    const auto yv = sample_yv(ModelParams(0.0, 0.0), RngSeed{10, 0}, n);
    Eigen::MatrixXd w(n, 2);
    w << yv.y, yv.v;
    const auto est = statistical_dimension(w, 20, RngSeed{10, 1}, default_workers());
    CHECK(std::abs(est.delta_hat / n - 0.5) < 0.02);
  }

  TEST_CASE("enlarging the subspace never shrinks the dimension")
  {
    const long n = 300;
    const auto yv = sample_yv(ModelParams(0.2, 1.0), RngSeed{11, 0}, n);
    Eigen::MatrixXd one(n, 1), two(n, 2);
    one << yv.y;
    two << yv.y, yv.v;
    const RngSeed rng{11, 1};
    const auto a = statistical_dimension(n, 200, rng);
    const auto b = statistical_dimension(one, 200, rng);
    const auto c = statistical_dimension(two, 200, rng);
    CHECK(b.delta_hat >= a.delta_hat - 1e-6);
    CHECK(c.delta_hat >= b.delta_hat - 1e-6);
  }

  TEST_CASE("basis preconditions")
  {
    Eigen::MatrixXd dup(10, 2);
    dup.col(0).setOnes();
    dup.col(1).setConstant(2.0);
    CHECK_THROWS_AS(statistical_dimension(dup, 5, RngSeed{}), std::invalid_argument);
    CHECK_THROWS_AS(statistical_dimension(Eigen::MatrixXd::Random(10, 4), 5, RngSeed{}), std::invalid_argument);
  }

  TEST_CASE("kinematic predictor")
  {
    const ModelParams null(0.0, 0.0);
    const long n = 10000;
    const unsigned w = default_workers();
    const auto hi = kinematic_predict(null, n, 7000, 0.05, 20, RngSeed{12, 0}, w);
    const auto lo = kinematic_predict(null, n, 3000, 0.05, 20, RngSeed{12, 0}, w);
    const auto mid = kinematic_predict(null, n, 5000, 0.05, 20, RngSeed{12, 0}, w);
    CHECK(hi.predicted == KinematicPrediction::NoMleWhp);
    CHECK(lo.predicted == KinematicPrediction::MleWhp);
    CHECK(mid.predicted == KinematicPrediction::IndeterminateBand);
    CHECK(hi.a_epsilon == doctest::Approx(std::sqrt(8.0 * std::log(80.0))));
    CHECK(hi.margin == doctest::Approx(7000 - 1 + hi.delta_hat - n));
    CHECK_THROWS_AS(kinematic_predict(null, 100, 1, 0.05, 5, RngSeed{}), std::invalid_argument);
    CHECK_THROWS_AS(kinematic_predict(null, 100, 99, 0.05, 5, RngSeed{}), std::invalid_argument);
    CHECK_THROWS_AS(kinematic_predict(null, 100, 50, 1.0, 5, RngSeed{}), std::invalid_argument);
  }

  TEST_CASE("tiny orthant oracle")
  {
    CHECK(tiny_orthant_oracle(make({-1.0, 1.0}, {-1.0, 1.0})));
    CHECK(!tiny_orthant_oracle(make({-1.0, -0.5, 0.5, 1.0}, {1.0, -1.0, 1.0, -1.0})));
    CHECK(tiny_orthant_oracle(make({0.3, -2.0, 1.0}, {1.0, 1.0, 1.0})));

    std::mt19937_64 gen(77);
    for (int i = 0; i < 200; ++i) {
      const auto d = oracle::random_tiny_dataset(gen);
      CAPTURE(i);
      CHECK(tiny_orthant_oracle(d) == check_separation(d).separated);
    }
    Dataset big;
    big.x = Eigen::MatrixXd::Zero(11, 1);
    big.y = Eigen::VectorXd::Ones(11);
    CHECK_THROWS_AS(tiny_orthant_oracle(big), std::invalid_argument);
  }
}
