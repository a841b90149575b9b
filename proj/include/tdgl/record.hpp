#pragma once

#include <map>
#include <string>
#include <vector>

#include "tdgl/config.hpp"
#include "tdgl/field.hpp"

namespace tdgl {

// Per-step scalar diagnostics; recorded every step so that energy-identity
// residuals can be formed from consecutive states without storing fields.
struct SeriesRow {
    double t = 0.0;
    double e_kinetic = 0.0, e_condensation = 0.0, e_field = 0.0, e_gauge = 0.0, e_total = 0.0;
    double max_abs_psi = 0.0;
    double excess = 0.0;  // discrete (|psi|^2 - 1)_+^2 integral
    double psi_l2 = 0.0, a_l2 = 0.0, div_a_l2 = 0.0;
    double psi_h1 = 0.0, lambda_m = 0.0;  // monitored norms
    double dpsi_l2 = 0.0, da_l2 = 0.0;    // backward difference-quotient norms
    int picard_iters = 0;
    int picard_converged = 1;
    long psi_solver_iters = 0;
    long a_solver_iters = 0;
};

struct Snapshot {
    double t = 0.0;
    long step = 0;
    CenterField psi;
    FaceField A;
};

enum class RunStatus { Complete, Failed };

// Everything a run produces: config copy, per-step series, cadenced field
// snapshots, completion status and summary numbers. Serializes to a
// directory (manifest.json + series.csv + snap_*.bin [+ .vtk]) from which it
// can be reloaded bit-exactly.
struct RunRecord {
    SimConfig config;
    VoxelDomain::Ptr dom;
    std::vector<SeriesRow> series;
    std::vector<Snapshot> snapshots;
    RunStatus status = RunStatus::Complete;
    std::string failure;
    std::map<std::string, double> extras;
    int picard_warnings = 0;  // steps where the Picard loop hit picard_max

    double dt() const { return config.time.dt; }
    std::uint64_t content_hash() const;

    void save(const std::string& dir) const;
    static RunRecord load(const std::string& dir);
};

void write_vtk_snapshot(const std::string& path, const Snapshot& snap);

}  // namespace tdgl
