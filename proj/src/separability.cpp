#include "mlephase/separability.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mlephase {

void Dataset::validate() const
{
  if (x.rows() < 1 || x.cols() < 1)
    throw std::invalid_argument("dataset: need n >= 1 and p >= 1");
  if (y.size() != x.rows())
    throw std::invalid_argument("dataset: label count does not match row count");
  if (!x.allFinite())
    throw std::invalid_argument("dataset: covariates must be finite");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 1.0 && y[i] != -1.0)
      throw std::invalid_argument("dataset: labels must be -1 or +1");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ','))
    fields.push_back(field);
  if (!line.empty() && line.back() == ',')
    fields.emplace_back();
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t\r");
    const auto last = f.find_last_not_of(" \t\r");
    f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
  }
  return fields;
}

double parse_number(const std::string& field, std::size_t line_no)
{
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size() || !std::isfinite(value))
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": invalid number '" + field + "'");
  return value;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("csv: empty input");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.front() != "y")
    throw std::runtime_error("csv: header must be y,x1,...,xp");
  const std::size_t cols = header.size();

  std::vector<double> labels;
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != cols)
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                               " fields");
    labels.push_back(parse_number(fields[0], line_no));
    for (std::size_t c = 1; c < cols; ++c)
      values.push_back(parse_number(fields[c], line_no));
  }
  if (labels.empty())
    throw std::runtime_error("csv: no data rows");

  const bool zero_one = std::all_of(labels.begin(), labels.end(), [](double v) { return v == 0.0 || v == 1.0; });
  const bool signed_pm = std::all_of(labels.begin(), labels.end(), [](double v) { return v == -1.0 || v == 1.0; });
  if (!zero_one && !signed_pm)
    throw std::runtime_error("csv: labels must be all in {-1,1} or all in {0,1}");

  const auto n = static_cast<Eigen::Index>(labels.size());
  const auto p = static_cast<Eigen::Index>(cols - 1);
  Dataset data;
  data.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(values.data(), n, p);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    data.y[i] = zero_one ? 2.0 * labels[i] - 1.0 : labels[i];
  data.validate();
  return data;
}

Dataset read_dataset_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return read_dataset_csv(in);
}

const char* to_string(LpStatus status)
{
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::UnboundedTreatedAsSeparated: return "unbounded-treated-as-separated";
    case LpStatus::InfeasibleImpossible: return "infeasible-impossible";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

SeparabilityVerdict check_separation(const Dataset& data, const SeparationOptions& opts)
{
  data.validate();
  if (!(opts.tol > 0.0))
    throw std::invalid_argument("check_separation: tol must be positive");

  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  SeparabilityVerdict verdict;

  const bool constant_labels = (data.y.array() == data.y[0]).all();
  if (opts.fit_intercept && constant_labels) {
    verdict.separated = true;
    verdict.trivial_labels = true;
    verdict.lp_objective = static_cast<double>(n);
    verdict.witness = SeparatingHyperplane{data.y[0], Eigen::VectorXd::Zero(p)};
    return verdict;
  }

  const Eigen::Index offset = opts.fit_intercept ? 1 : 0;
  RowMatrix a(n, p + offset);
  if (opts.fit_intercept)
    a.col(0) = data.y;
  a.rightCols(p) = data.y.asDiagonal() * data.x;

  const Eigen::VectorXd c = a.transpose() * Eigen::VectorXd::Ones(n);
  const NonnegL1Result lp = solve_nonneg_l1(a, c, opts.simplex);
  verdict.iterations = lp.iterations;
  verdict.lp_objective = lp.value;

  switch (lp.status) {
    case SimplexStatus::Optimal: verdict.status = LpStatus::Optimal; break;
    case SimplexStatus::IterationLimit: verdict.status = LpStatus::IterationLimit; break;
    case SimplexStatus::Unbounded:
      // The dual objective is a norm, so it is bounded below by 0.
      throw std::logic_error("check_separation: simplex reported an unbounded l1 problem");
  }

  verdict.separated = lp.value > opts.tol * static_cast<double>(n);
  if (verdict.separated && verdict.status == LpStatus::Optimal) {
    const Eigen::VectorXd coef = (-lp.multipliers).cwiseMax(-1.0).cwiseMin(1.0);
    SeparatingHyperplane w;
    w.b0 = opts.fit_intercept ? coef[0] : 0.0;
    w.b = coef.tail(p);
    verdict.witness = std::move(w);
  }
  return verdict;
}

bool check_single_variable_separation(const Eigen::VectorXd& v, const Eigen::VectorXd& y)
{
  if (v.size() != y.size() || v.size() == 0)
    throw std::invalid_argument("check_single_variable_separation: size mismatch");
  if (!v.allFinite())
    throw std::invalid_argument("check_single_variable_separation: values must be finite");

  constexpr double inf = std::numeric_limits<double>::infinity();
  double pos_min = inf, pos_max = -inf, neg_min = inf, neg_max = -inf;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (y[i] == 1.0) {
      pos_min = std::min(pos_min, v[i]);
      pos_max = std::max(pos_max, v[i]);
    } else if (y[i] == -1.0) {
      neg_min = std::min(neg_min, v[i]);
      neg_max = std::max(neg_max, v[i]);
    } else {
      throw std::invalid_argument("check_single_variable_separation: labels must be -1 or +1");
    }
  }
  if (pos_min == inf || neg_min == inf)
    return true;  // b1 = 0, b0 = the common label

  // A threshold c with one class on each closed side. It fails to be
  // nontrivial only when every point sits exactly on c.
  auto splits = [&](double low_max, double high_min, double low_min, double high_max) {
    return low_max <= high_min && !(low_min == high_max && low_max == high_min);
  };
  return splits(neg_max, pos_min, neg_min, pos_max) || splits(pos_max, neg_min, pos_min, neg_max);
}

}  // namespace mlephase
