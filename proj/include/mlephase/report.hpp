#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mlephase/boundary.hpp"
#include "mlephase/cone_geom.hpp"
#include "mlephase/phase_sim.hpp"
#include "mlephase/separability.hpp"

namespace mlephase {

/// `gamma,h,t0,t1,converged`, or with prob_axis `p_y1,gamma,h,t0,t1,converged`
/// where p_y1 = e^gamma / (1 + e^gamma).
std::string boundary_csv(const std::vector<CurvePoint>& curve, bool prob_axis);
nlohmann::json boundary_json(const CurveSpec& spec, const std::vector<CurvePoint>& curve);

/// `kappa,gamma,replicates,exists_count,p_hat`, one line per cell, gamma-major.
std::string diagram_csv(const PhaseDiagram& diagram);
nlohmann::json grid_json(const GridSpec& spec);
nlohmann::json diagram_json(const PhaseDiagram& diagram);

/// Heatmap with kappa on the x axis and gamma on the y axis; white is an
/// existence probability of 1, black 0. The theoretical curve kappa = h(gamma)
/// is overlaid as a red polyline.
std::string diagram_svg(const PhaseDiagram& diagram, const std::vector<CurvePoint>& theory);

nlohmann::json to_json(const SeparabilityVerdict& verdict);
nlohmann::json to_json(const QnEstimate& estimate);
nlohmann::json to_json(const StatDimEstimate& estimate);
nlohmann::json to_json(const KinematicVerdict& verdict);

/// Shortest round-trip-free formatting used by every emitter ("%.12g").
std::string format_number(double value);

/// Writes to `path.tmp` and renames over `path`, so readers never see a
/// partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mlephase
