#pragma once

#include <optional>

#include "tdgl/config.hpp"
#include "tdgl/field.hpp"
#include "tdgl/galerkin.hpp"
#include "tdgl/linsolve.hpp"
#include "tdgl/mms.hpp"
#include "tdgl/record.hpp"

namespace tdgl {

enum class Gauge { Lorentz, ZeroPotential };

struct PhysParams {
    double eta = 1.0;
    double kappa = 1.0;
    double t_final = 1.0;
    AppliedField applied;
};

struct TimeDisc {
    double dt = 1e-3;
    int picard_max = 1;
    double picard_tol = 1e-8;
    Scheme scheme = Scheme::Lagged;
};

struct SimState {
    double t = 0.0;
    CenterField psi;
    FaceField A;
    std::vector<double> coeffs;  // spectral mode only
};

// shared step inputs: physics, gauge choice, solver options, optional
// manufactured forcing evaluated at the target time
struct StepContext {
    PhysParams phys;
    Gauge gauge = Gauge::Lorentz;
    SolveOptions solver;
    const CenterField* forcing_psi = nullptr;
    const FaceField* forcing_A = nullptr;
    const FaceField* h_rhs = nullptr;  // precomputed curl contribution of H
};

struct StepReport {
    int picard_iters = 1;
    bool picard_converged = true;
    double update_distance = 0.0;
    std::vector<double> update_history;
    SolveStats psi_stats;
    SolveStats a_stats;
    long psi_iters_total = 0;
    long a_iters_total = 0;
};

// Semi-implicit update of the order parameter: the covariant operator, the
// gauge coupling and the reaction factor multiply psi^{n+1}, with the
// reaction coefficient |psi^n|^2 - 1 frozen at the previous step.
CenterField step_psi(const CenterField& psi_n, const FaceField& A_used, const StepContext& cx,
                     double dt, SolveStats* stats = nullptr);

// Implicit update of the magnetic potential: curl-curl minus grad-div (the
// grad-div branch dropped in the zero-potential gauge), natural-boundary
// insertion of H, supercurrent source lagged at (psi_used, A_source).
FaceField step_A(const FaceField& A_n, const CenterField& psi_used, const FaceField& A_source,
                 const StepContext& cx, double dt, SolveStats* stats = nullptr);

// Fixed-point coupling of the two half-updates. With picard_max = 1 this is
// exactly the lagged scheme. Non-convergence at picard_max is reported, not
// fatal.
SimState picard_coupled_step(const SimState& s, const StepContext& cx, const TimeDisc& td,
                             StepReport* report = nullptr);

// Same coupling with the potential advanced in the span of the Galerkin
// basis; the linear part is diagonal in the eigenbasis.
SimState picard_coupled_step_galerkin(const SimState& s, const StepContext& cx,
                                      const TimeDisc& td, const GalerkinBasis& basis,
                                      StepReport* report = nullptr);

// curl contribution of the applied field to the potential equation
// (assembled once per run for static H)
FaceField applied_field_rhs(const VoxelDomain::Ptr& dom, const AppliedField& H);

struct InitialData {
    CenterField psi;
    FaceField A;
    std::shared_ptr<ManufacturedSolution> mms;
};

InitialData build_initial_data(const SimConfig& cfg, const VoxelDomain::Ptr& dom);

PhysParams make_phys_params(const SimConfig& cfg);
TimeDisc make_time_disc(const SimConfig& cfg);

// Full time integrations driven by a config; deterministic given the config.
RunRecord run_simulation(const SimConfig& cfg);
RunRecord run_zero_potential_gauge(const SimConfig& cfg);
RunRecord run_galerkin(const SimConfig& cfg, const GalerkinBasis& basis);

// dispatch on cfg.mode (computing a basis when needed)
RunRecord run_from_config(const SimConfig& cfg);

}  // namespace tdgl
