#pragma once

#include <string>
#include <vector>

#include "tdgl/config.hpp"
#include "tdgl/record.hpp"

namespace tdgl {

// Spatial refinement on the manufactured-solution preset; each multiplier m
// scales the cell counts by m and the time step by 1/m^2 so the backward
// Euler error refines at the spatial rate.
struct RefinementResult {
    std::vector<int> multipliers;
    std::vector<double> errors;  // combined final-time L2 error (psi, A)
    std::vector<double> orders;  // observed spatial order between levels
};
RefinementResult sweep_refinement(const SimConfig& base, const std::vector<int>& multipliers);

// Time-step halving on a fixed grid; errors against the exact solution for
// the manufactured preset, otherwise against the finest-dt trajectory.
struct DtSweepResult {
    std::vector<double> dts;
    std::vector<double> errors;
    std::vector<double> orders;
};
DtSweepResult sweep_dt(const SimConfig& base, int levels);

// Galerkin-dimension sweep plus full-dimension consistency check.
struct GalerkinSweepResult {
    std::vector<int> n_values;
    std::vector<double> distance_to_full;  // final-state L2 distance to the grid run
    double full_vs_grid_distance = 0.0;    // N = DOF count vs run_simulation
    double max_monitored_norm = 0.0;       // max over runs/times of psi_H1 + lambda_M
    bool monotone = false;
    int full_dofs = 0;
};
GalerkinSweepResult sweep_galerkin_N(const SimConfig& base, const std::vector<int>& ns,
                                     bool include_full = true);

// Initial-data perturbation sweep realizing the uniqueness estimate.
struct DeltaSweepResult {
    std::vector<double> deltas;
    std::vector<double> g_fits;
    std::vector<double> terminal_deltas;
    std::vector<double> terminal_over_delta;
    double g_spread_rel = 0.0;      // (max-min)/|median| of the Gronwall fits
    double ratio_spread_rel = 0.0;  // max/min - 1 of terminal_over_delta
};
DeltaSweepResult sweep_delta(const SimConfig& base, const std::vector<double>& deltas);

// Lorentz vs zero-potential comparison across resolutions (dt scaled by
// 1/m^2); distances are final-time observable gaps.
struct GaugeSweepResult {
    std::vector<int> multipliers;
    std::vector<double> psi_distance;
    std::vector<double> curl_distance;
};
GaugeSweepResult sweep_gauge(const SimConfig& base, const std::vector<int>& multipliers);

std::string report_json(const RefinementResult& r);
std::string report_json(const DtSweepResult& r);
std::string report_json(const GalerkinSweepResult& r);
std::string report_json(const DeltaSweepResult& r);
std::string report_json(const GaugeSweepResult& r);

}  // namespace tdgl
