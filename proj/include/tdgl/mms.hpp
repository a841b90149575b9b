#pragma once

#include "tdgl/field.hpp"

namespace tdgl {

// Forced exact solution on the unit cube used for convergence testing:
//   psi(x,t) = 0.5 e^{-t} cos(pi x)
//   A(x,t)   = sin(t) W,  W = (sin(pi x)cos(pi y), -cos(pi x)sin(pi y), 0)
// W is divergence-free with W·n = 0 and (curl W) x n = 0 on the cube
// boundary, so the exact pair satisfies every boundary condition of the
// continuous problem and the forcing below is the exact residual of the
// gauge-coupled system (H = 0).
struct ManufacturedSolution {
    double eta = 1.0;
    double kappa = 1.0;

    CenterField psi_exact(const VoxelDomain::Ptr& dom, double t) const;
    FaceField A_exact(const VoxelDomain::Ptr& dom, double t) const;
    CenterField psi_forcing(const VoxelDomain::Ptr& dom, double t) const;
    FaceField A_forcing(const VoxelDomain::Ptr& dom, double t) const;
};

}  // namespace tdgl
