#pragma once

#include "tdgl/dynamics.hpp"
#include "tdgl/field.hpp"
#include "tdgl/record.hpp"

namespace tdgl {

// Free-energy style functional driving the dissipation identity; every
// component is nonnegative and total is their sum.
struct EnergyBreakdown {
    double kinetic = 0.0;       // 1/2 |(i/kappa grad + A) psi|^2
    double condensation = 0.0;  // 1/4 (|psi|^2 - 1)^2
    double field = 0.0;         // 1/2 |curl A - H|^2
    double gauge = 0.0;         // 1/2 |div A|^2
    double total = 0.0;
};

EnergyBreakdown energy(const CenterField& psi, const FaceField& A, const AppliedField& H,
                       const PhysParams& params);

// Per-step residual of the discrete dissipation identity,
//   r^n = (E^{n+1} - E^n)/dt + ||dA/dt||^2 + (eta/2)||dpsi/dt||^2
//         - (eta kappa^2 / 2)||div A^{n+1}||^2,
// formed from the per-step series; nonpositive up to O(dt) + O(h^2).
std::vector<double> lyapunov_residual(const RunRecord& record, const PhysParams& params);

// max positive entry of the residual series (0 when none)
double max_positive_residual(const std::vector<double>& r);

// checks E(t) <= (E(0)+eps) exp(eta kappa^2 t) + eps at every recorded time
bool energy_envelope_holds(const RunRecord& record, const PhysParams& params, double eps);

struct BoundReport {
    double max_abs_psi = 0.0;     // over the whole run
    std::vector<double> excess;   // (|psi|^2-1)_+^2 integral per step
    double max_excess = 0.0;
};

BoundReport bound_monitor(const RunRecord& record);

// Smooth low-frequency test functions for weak-form residuals.
struct TestBank {
    std::vector<CenterField> center_tests;
    std::vector<FaceField> face_tests;
    static TestBank build(const VoxelDomain::Ptr& dom);
};

struct WeakResidual {
    double r_psi = 0.0;  // max over center tests, normalized by ||phi||_H1
    double r_A = 0.0;    // max over face tests, normalized by ||a||_M
};

// Backward-difference weak residual of the coupled variational equations at
// the later state; optional manufactured forcing is subtracted.
WeakResidual weak_residual(const SimState& state, const SimState& state_next,
                           const PhysParams& params, double dt, const TestBank& bank,
                           Gauge gauge = Gauge::Lorentz,
                           const CenterField* forcing_psi = nullptr,
                           const FaceField* forcing_A = nullptr);

// weak residual of a single test pair (for linearity checks)
cplx weak_residual_psi_single(const SimState& state, const SimState& state_next,
                              const PhysParams& params, double dt, const CenterField& phi,
                              Gauge gauge = Gauge::Lorentz,
                              const CenterField* forcing_psi = nullptr);
double weak_residual_A_single(const SimState& state, const SimState& state_next,
                              const PhysParams& params, double dt, const FaceField& a,
                              Gauge gauge = Gauge::Lorentz,
                              const FaceField* forcing_A = nullptr);

struct RunDelta {
    std::vector<double> times;
    std::vector<double> psi_delta_l2;  // ||psi1 - psi2||
    std::vector<double> a_delta_l2;    // ||A1 - A2||
    std::vector<double> v;             // eta/2 ||e||^2 + 1/2 ||E||^2
    double initial_v = 0.0;
    double terminal_delta = 0.0;  // sqrt(||e(T)||^2 + ||E(T)||^2)
    double g_fit = 0.0;           // max over t>0 of log(V/V0)/t
};

// Two-run stability diagnostic; configs must agree except for initial data.
RunDelta stability_compare(const RunRecord& run1, const RunRecord& run2);

// ||grad A||^2 / (||curl A||^2 + ||div A||^2 + ||A||^2) with componentwise
// centered gradients, one-sided at boundary-adjacent samples.
double norm_ratio(const FaceField& A);

struct GaugeDistance {
    std::vector<double> times;
    std::vector<double> psi_observable;   // || |psi_L| - |psi_Z| ||
    std::vector<double> curl_observable;  // || curl A_L - curl A_Z ||
};

GaugeDistance gauge_compare(const RunRecord& lorentz, const RunRecord& zero_potential);

}  // namespace tdgl
