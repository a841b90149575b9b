#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdgl/field.hpp"

namespace tdgl {

// Mapping between interior-face grid locations and contiguous DOF ids,
// x-faces first, then y, then z, lexicographic within each direction.
struct FaceDofMap {
    std::array<std::vector<std::int64_t>, 3> face_to_dof;  // -1 for non-DOF faces
    std::vector<std::pair<int, std::size_t>> dof_to_face;

    static FaceDofMap build(const VoxelDomain& d);
    int size() const { return static_cast<int>(dof_to_face.size()); }
};

// Sparse symmetric operator over interior-face DOFs realizing
//   (M u, v) = (u, v) + (curl u, curl v) + (div u, div v)
// with the zero-insertion curl on boundary edges. The mass matrix is the
// uniform cell-volume diagonal, so the generalized eigenproblem reduces to a
// standard symmetric one.
class CurlDivOperator {
public:
    static CurlDivOperator assemble(VoxelDomain::Ptr dom);

    int dofs() const { return map_.size(); }
    const FaceDofMap& dof_map() const { return map_; }
    const VoxelDomain::Ptr& domain() const { return dom_; }
    double mass_weight() const { return dom_->cell_volume(); }

    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    std::vector<double> diagonal() const;

    FaceField to_field(const std::vector<double>& u) const;
    std::vector<double> from_field(const FaceField& f) const;

    // dense copy for the small-problem fallback and test oracles
    // (guarded to dofs() <= 3000)
    std::vector<double> dense_row_major() const;

    double max_abs_entry() const;
    double max_asymmetry() const;

private:
    VoxelDomain::Ptr dom_;
    FaceDofMap map_;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int32_t> col_;
    std::vector<double> val_;
};

struct GalerkinBasis {
    int n = 0;
    std::vector<double> eigenvalues;   // nondecreasing
    std::vector<FaceField> vectors;    // mass-orthonormal: (a_i, a_j) = delta_ij
    double orthonormality_error = 0.0;
    double max_relative_residual = 0.0;
    std::uint64_t domain_hash = 0;

    void save(const std::string& path) const;
    static GalerkinBasis load(const std::string& path, const VoxelDomain::Ptr& dom);
};

enum class EigMethod { Auto, Iterative, Dense };

struct EigOptions {
    EigMethod method = EigMethod::Auto;
    double residual_tol = 1e-8;   // relative eigen-residual in the mass norm
    std::uint64_t seed = 0x5eed;
    int max_restarts = 60;
    double cg_tol = 1e-12;
};

// N smallest eigenpairs of the curl-div operator. The iterative path is
// shift-invert Lanczos with full reorthogonalization and deflation restarts,
// shifted at the coercivity floor; the dense path (Eigen) serves small
// problems and acts as the oracle in tests.
GalerkinBasis eigenbasis_M(const CurlDivOperator& op, int n, const EigOptions& opts = {});

struct Projection {
    std::vector<double> coefficients;
    FaceField reconstruction;
};

// Orthogonal projection onto span(basis) in the M-inner product; because the
// basis diagonalizes M, the coefficients are the mass-inner-product pairings
// (computed here through the M-pairing normalized by the eigenvalues).
Projection project_onto_XN(const FaceField& A0, const GalerkinBasis& basis,
                           const CurlDivOperator& op);

}  // namespace tdgl
