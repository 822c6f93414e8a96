#include "mlephase/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mlephase {

std::string format_number(double value)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string boundary_csv(const std::vector<CurvePoint>& curve, bool prob_axis)
{
  std::ostringstream out;
  if (prob_axis)
    out << "p_y1,";
  out << "gamma,h,t0,t1,converged\n";
  for (const auto& pt : curve) {
    const auto& s = pt.solution;
    if (prob_axis)
      out << format_number(sigmoid(pt.gamma)) << ',';
    out << format_number(pt.gamma) << ',' << format_number(s.h) << ',' << format_number(s.t_star[0]) << ','
        << format_number(s.t_star[1]) << ',' << (s.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

nlohmann::json boundary_json(const CurveSpec& spec, const std::vector<CurvePoint>& curve)
{
  nlohmann::json points = nlohmann::json::array();
  for (const auto& pt : curve) {
    const auto& s = pt.solution;
    points.push_back({{"gamma", pt.gamma},
                      {"p_y1", sigmoid(pt.gamma)},
                      {"beta0", s.params.beta0()},
                      {"gamma0", s.params.gamma0()},
                      {"h", s.h},
                      {"t0", s.t_star[0]},
                      {"t1", s.t_star[1]},
                      {"iterations", s.iterations},
                      {"grad_norm", s.grad_norm},
                      {"converged", s.converged}});
  }
  return {{"rho", spec.rho}, {"points", points}};
}

std::string diagram_csv(const PhaseDiagram& diagram)
{
  std::ostringstream out;
  out << "kappa,gamma,replicates,exists_count,p_hat\n";
  for (const auto& c : diagram.cells)
    out << format_number(c.kappa) << ',' << format_number(c.gamma) << ',' << c.replicates << ',' << c.exists_count
        << ',' << format_number(c.p_hat) << '\n';
  return out.str();
}

nlohmann::json grid_json(const GridSpec& spec)
{
  return {{"n", spec.n},
          {"kappa_grid", spec.kappa_grid},
          {"gamma_grid", spec.gamma_grid},
          {"rho", spec.rho},
          {"replicates", spec.replicates},
          {"fit_intercept", spec.fit_intercept},
          {"seed", spec.base_seed.seed},
          {"stream", spec.base_seed.stream}};
}

nlohmann::json diagram_json(const PhaseDiagram& diagram)
{
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : diagram.cells)
    cells.push_back({{"kappa", c.kappa},
                     {"gamma", c.gamma},
                     {"replicates", c.replicates},
                     {"exists_count", c.exists_count},
                     {"failures", c.failures},
                     {"p_hat", c.p_hat}});
  return {{"spec", grid_json(diagram.spec)}, {"cells", cells}};
}

std::string diagram_svg(const PhaseDiagram& diagram, const std::vector<CurvePoint>& theory)
{
  const auto& spec = diagram.spec;
  const std::size_t cols = spec.kappa_grid.size();
  const std::size_t rows = spec.gamma_grid.size();
  constexpr double margin = 50.0, width = 600.0, height = 400.0;

  // Cells are centered on grid values; spacing from neighbours (or 1 for a single value).
  auto edges = [](const std::vector<double>& grid) {
    const double step = grid.size() > 1 ? (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1) : 1.0;
    return std::pair{grid.front() - 0.5 * step, grid.back() + 0.5 * step};
  };
  const auto [k_lo, k_hi] = edges(spec.kappa_grid);
  const auto [g_lo, g_hi] = edges(spec.gamma_grid);
  auto px = [&](double kappa) { return margin + (kappa - k_lo) / (k_hi - k_lo) * width; };
  auto py = [&](double gamma) { return margin + height - (gamma - g_lo) / (g_hi - g_lo) * height; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width + 2 * margin) << "\" height=\""
      << format_number(height + 2 * margin) << "\">\n";
  const double cw = width / static_cast<double>(cols);
  const double ch = height / static_cast<double>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const int shade = static_cast<int>(std::lround(255.0 * diagram.at(r, c).p_hat));
      out << "<rect x=\"" << format_number(margin + cw * static_cast<double>(c)) << "\" y=\""
          << format_number(margin + height - ch * static_cast<double>(r + 1)) << "\" width=\"" << format_number(cw)
          << "\" height=\"" << format_number(ch) << "\" fill=\"rgb(" << shade << ',' << shade << ',' << shade
          << ")\"/>\n";
    }
  }
  if (!theory.empty()) {
    out << "<clipPath id=\"plot\"><rect x=\"" << format_number(margin) << "\" y=\"" << format_number(margin)
        << "\" width=\"" << format_number(width) << "\" height=\"" << format_number(height) << "\"/></clipPath>\n";
    out << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& pt : theory) {
      if (!pt.solution.converged)
        continue;
      out << (first ? "" : " ") << format_number(px(pt.solution.h)) << ',' << format_number(py(pt.gamma));
      first = false;
    }
    out << "\"/>\n";
  }
  out << "<text x=\"" << format_number(margin + width / 2) << "\" y=\"" << format_number(height + 1.7 * margin)
      << "\" text-anchor=\"middle\">kappa</text>\n";
  out << "<text x=\"15\" y=\"" << format_number(margin + height / 2) << "\">gamma</text>\n";
  out << "</svg>\n";
  return out.str();
}

nlohmann::json to_json(const SeparabilityVerdict& verdict)
{
  nlohmann::json j{{"separated", verdict.separated},
                   {"mle_exists", !verdict.separated},
                   {"lp_objective", verdict.lp_objective},
                   {"solver_status", to_string(verdict.status)},
                   {"trivial_labels", verdict.trivial_labels},
                   {"iterations", verdict.iterations}};
  if (verdict.witness) {
    const auto& b = verdict.witness->b;
    j["witness"] = {{"b0", verdict.witness->b0}, {"b", std::vector<double>(b.data(), b.data() + b.size())}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const QnEstimate& e)
{
  return {{"beta0", e.params.beta0()},
          {"gamma0", e.params.gamma0()},
          {"n", e.n},
          {"trials", e.trials},
          {"values", e.values},
          {"mean", e.mean},
          {"stderr", e.stderr_},
          {"unbounded_trials", e.unbounded_trials},
          {"fallback_trials", e.fallback_trials}};
}

nlohmann::json to_json(const StatDimEstimate& e)
{
  return {{"delta_hat", e.delta_hat}, {"stderr", e.stderr_}, {"trials", e.trials}};
}

nlohmann::json to_json(const KinematicVerdict& v)
{
  return {{"n", v.n},
          {"p", v.p},
          {"delta_hat", v.delta_hat},
          {"delta_stderr", v.delta_stderr},
          {"margin", v.margin},
          {"epsilon", v.epsilon},
          {"a_epsilon", v.a_epsilon},
          {"band", v.a_epsilon * std::sqrt(static_cast<double>(v.n))},
          {"predicted", to_string(v.predicted)}};
}

void write_file_atomic(const std::string& path, const std::string& content)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

}  // namespace mlephase
