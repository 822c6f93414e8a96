#include "mlephase/simplex.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mlephase {

namespace {

// Column layout: [0, n) generators, [n, n+m) r_plus (-e_j), [n+m, n+2m) r_minus (+e_j).
class L1Simplex
{
 public:
  L1Simplex(const RowMatrix& rows, const Eigen::VectorXd& g, const SimplexOptions& opts)
      : rows_(rows)
      , rhs_(-g)
      , opts_(opts)
      , n_(rows.rows())
      , m_(rows.cols())
      , cols_(n_ + 2 * m_)
      , basis_(static_cast<std::size_t>(m_))
      , is_basic_(static_cast<std::size_t>(cols_), 0)
      , binv_(Eigen::MatrixXd::Zero(m_, m_))
      , xb_(m_)
      , reduced_(cols_)
  {
    for (Eigen::Index j = 0; j < m_; ++j) {
      const bool use_minus = rhs_[j] >= 0.0;
      basis_[j] = use_minus ? n_ + m_ + j : n_ + j;
      is_basic_[basis_[j]] = 1;
      binv_(j, j) = use_minus ? 1.0 : -1.0;
      xb_[j] = std::abs(rhs_[j]);
    }
    if (opts_.max_iterations <= 0)
      opts_.max_iterations = 50 * static_cast<long>(n_ + m_) + 1000;
    if (opts_.refactor_interval <= 0)
      opts_.refactor_interval = std::max<int>(64, static_cast<int>(m_ / 2));
  }

  NonnegL1Result run()
  {
    NonnegL1Result out;
    Eigen::VectorXd column(m_), w(m_), rho(m_), alpha_rows(n_);
    int degenerate_run = 0;
    int since_refactor = 0;
    recompute_reduced();

    for (;;) {
      const bool bland = degenerate_run >= opts_.degenerate_streak;
      Eigen::Index entering = price(bland);
      if (entering < 0) {
        // Confirm against freshly computed reduced costs before declaring optimality.
        recompute_reduced();
        entering = price(bland);
        if (entering < 0) {
          out.status = SimplexStatus::Optimal;
          break;
        }
      }
      if (out.iterations >= opts_.max_iterations) {
        out.status = SimplexStatus::IterationLimit;
        break;
      }

      load_column(entering, column);
      w.noalias() = binv_ * column;
      const Eigen::Index leave = ratio_test(w, bland);
      if (leave < 0) {
        out.status = SimplexStatus::Unbounded;
        break;
      }
      const double pivot = w[leave];

      // Update reduced costs from the pivot row alpha_j = e_leave' B^{-1} a_j
      // instead of recomputing rows * pi.
      rho = binv_.row(leave).transpose();
      alpha_rows.noalias() = rows_ * rho;
      const double ratio_d = reduced_[entering] / pivot;
      reduced_.head(n_) -= ratio_d * alpha_rows;
      reduced_.segment(n_, m_) += ratio_d * rho;
      reduced_.tail(m_) -= ratio_d * rho;
      const Eigen::Index leaving_var = basis_[leave];
      reduced_[leaving_var] = -ratio_d;

      const double step = std::max(xb_[leave], 0.0) / pivot;
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;
      if (bland)
        ++out.bland_pivots;

      xb_ -= step * w;
      xb_[leave] = step;
      is_basic_[leaving_var] = 0;
      basis_[leave] = entering;
      is_basic_[entering] = 1;
      reduced_[entering] = 0.0;

      // Product-form update of the explicit inverse.
      binv_.row(leave) /= pivot;
      w[leave] = 0.0;
      binv_.noalias() -= w * binv_.row(leave);

      ++out.iterations;
      if (++since_refactor >= opts_.refactor_interval) {
        refactor();
        recompute_reduced();
        since_refactor = 0;
      }
    }

    out.mu = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index j = 0; j < m_; ++j)
      if (basis_[j] < n_)
        out.mu[basis_[j]] = std::max(xb_[j], 0.0);
    out.multipliers = multipliers();
    out.value = (rows_.transpose() * out.mu - rhs_).lpNorm<1>();
    return out;
  }

 private:
  double cost(Eigen::Index col) const { return col < n_ ? 0.0 : 1.0; }

  void load_column(Eigen::Index col, Eigen::VectorXd& out) const
  {
    if (col < n_) {
      out = rows_.row(col).transpose();
      return;
    }
    out.setZero();
    if (col < n_ + m_)
      out[col - n_] = -1.0;
    else
      out[col - n_ - m_] = 1.0;
  }

  Eigen::VectorXd multipliers() const
  {
    Eigen::VectorXd cb(m_);
    for (Eigen::Index j = 0; j < m_; ++j)
      cb[j] = cost(basis_[j]);
    return binv_.transpose() * cb;
  }

  void recompute_reduced()
  {
    const Eigen::VectorXd pi = multipliers();
    reduced_.head(n_).noalias() = -(rows_ * pi);
    reduced_.segment(n_, m_) = (1.0 + pi.array()).matrix();
    reduced_.tail(m_) = (1.0 - pi.array()).matrix();
    for (Eigen::Index j = 0; j < m_; ++j)
      reduced_[basis_[j]] = 0.0;
  }

  // Entering column, or -1 when no reduced cost is below -tol.
  // Dantzig: most negative. Bland: smallest index.
  Eigen::Index price(bool bland) const
  {
    const double tol = opts_.optimality_tol;
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (Eigen::Index col = 0; col < cols_; ++col) {
      const double d = reduced_[col];
      if (is_basic_[col] || d >= -tol)
        continue;
      if (bland)
        return col;
      if (d < best_score) {
        best_score = d;
        best = col;
      }
    }
    return best;
  }

  Eigen::Index ratio_test(const Eigen::VectorXd& w, bool bland) const
  {
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m_; ++j) {
      if (w[j] <= opts_.pivot_tol)
        continue;
      const double ratio = std::max(xb_[j], 0.0) / w[j];
      if (leave < 0 || ratio < best - 1e-12) {
        best = ratio;
        leave = j;
      } else if (ratio <= best + 1e-12) {
        // Ties: Bland picks the smallest variable index; otherwise prefer the larger pivot.
        const bool take = bland ? basis_[j] < basis_[leave] : w[j] > w[leave];
        if (take) {
          best = std::min(best, ratio);
          leave = j;
        }
      }
    }
    return leave;
  }

  void refactor()
  {
    Eigen::MatrixXd basis_matrix(m_, m_);
    Eigen::VectorXd column(m_);
    for (Eigen::Index j = 0; j < m_; ++j) {
      load_column(basis_[j], column);
      basis_matrix.col(j) = column;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    binv_ = lu.inverse();
    xb_.noalias() = binv_ * rhs_;
    for (Eigen::Index j = 0; j < m_; ++j)
      if (xb_[j] < 0.0 && xb_[j] > -1e-9)
        xb_[j] = 0.0;
  }

  const RowMatrix& rows_;
  Eigen::VectorXd rhs_;
  SimplexOptions opts_;
  Eigen::Index n_;
  Eigen::Index m_;
  Eigen::Index cols_;
  std::vector<Eigen::Index> basis_;
  std::vector<char> is_basic_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  Eigen::VectorXd reduced_;
};

}  // namespace

NonnegL1Result solve_nonneg_l1(const RowMatrix& rows, const Eigen::VectorXd& g, const SimplexOptions& opts)
{
  if (rows.cols() != g.size())
    throw std::invalid_argument("solve_nonneg_l1: dimension mismatch");
  if (rows.cols() == 0)
    throw std::invalid_argument("solve_nonneg_l1: empty problem");
  return L1Simplex(rows, g, opts).run();
}

}  // namespace mlephase
