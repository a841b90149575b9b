#pragma once

#include "tdgl/field.hpp"

namespace tdgl {

// Staggered-grid (MAC) discrete differential operators.
//
// Discrete L2 pairings use uniform cell-volume weights and run over inside
// cells, interior faces and interior edges respectively. With that choice
// the operator pairs below are exact adjoints (summation by parts holds to
// roundoff):
//   (div A, f) = -(A, grad f)     for all A with A·n = 0 on boundary faces
//   (curl_fe A, E) = (A, curl_ef E) with boundary-edge values zeroed
// and curl∘grad vanishes identically on interior edges.

// Centered difference across interior faces; boundary faces get zero, which
// is the mirror-ghost encoding of the homogeneous Neumann condition.
FaceField grad_center_to_face(const ScalarField& f);
CFaceField grad_center_to_face(const CenterField& f);

// Discrete divergence at inside cells. Boundary-face values participate with
// their stored value (zero for potentials).
ScalarField div_face_to_center(const FaceField& A);
CenterField div_face_to_center(const CFaceField& A);

// Discrete curl on interior edges; boundary-edge entries are zero.
EdgeField curl_face_to_edge_zero(const FaceField& A);

// Discrete curl on interior edges with the natural-boundary insertion: on
// boundary edges the tangential component of the applied field H replaces
// the (uncomputable) one-sided curl.
EdgeField curl_face_to_edge(const FaceField& A, const AppliedField& H);

// Adjoint curl, edges to interior faces (the transpose stencil).
FaceField curl_edge_to_face(const EdgeField& E);

// Weak-form operator of the magnetic-potential equation: the edge curl with
// boundary insertion curled back to faces, minus the gradient of the
// divergence.
FaceField curlcurl_minus_graddiv(const FaceField& A, const AppliedField& H);

// (i/kappa) grad psi + A * avg(psi) on interior faces; psi is averaged to
// faces by the arithmetic mean of the two adjacent centers.
CFaceField covariant_grad(const CenterField& psi, const FaceField& A, double kappa);

// Hermitian positive-semidefinite center operator satisfying
//   (L psi, phi) = (covariant_grad psi, covariant_grad phi)
// for all center fields phi. For A = 0 it reduces to -(1/kappa^2) * Neumann
// Laplacian.
CenterField covariant_laplacian(const CenterField& psi, const FaceField& A, double kappa);

// Volume-weighted discrete L2 pairings (pairwise-tree summation, conjugate
// linear in the second argument). Mismatched domains raise
// std::invalid_argument.
double inner_product(const ScalarField& u, const ScalarField& v);
cplx inner_product(const CenterField& u, const CenterField& v);
double inner_product(const FaceField& u, const FaceField& v);
cplx inner_product(const CFaceField& u, const CFaceField& v);
double inner_product(const EdgeField& u, const EdgeField& v);

double norm_l2(const ScalarField& u);
double norm_l2(const CenterField& u);
double norm_l2(const FaceField& u);
double norm_l2(const CFaceField& u);
double norm_l2(const EdgeField& u);

double max_abs(const CenterField& u);

// A interpolated to cell centers (componentwise face average); for VTK
// output and observables.
std::array<ScalarField, 3> face_to_center_average(const FaceField& A);

}  // namespace tdgl
