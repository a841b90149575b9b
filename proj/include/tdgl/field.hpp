#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tdgl/domain.hpp"
#include "tdgl/util.hpp"

namespace tdgl {

// Cell-centered data. Entries for outside cells must stay zero; every
// operation in ops.hpp preserves that.
template <typename T>
struct CenterData {
    VoxelDomain::Ptr dom;
    std::vector<T> v;

    static CenterData zeros(VoxelDomain::Ptr d) {
        CenterData f;
        f.dom = std::move(d);
        f.v.assign(f.dom->cell_count(), T{});
        return f;
    }
    T& at(int i, int j, int k) { return v[dom->cell_index(i, j, k)]; }
    const T& at(int i, int j, int k) const { return v[dom->cell_index(i, j, k)]; }
};

using ScalarField = CenterData<double>;
using CenterField = CenterData<cplx>;  // order parameter psi

// Face-staggered data (MAC layout); component d lives on faces normal to
// axis d. For a magnetic potential, boundary and exterior face entries are
// exactly zero, which encodes A·n = 0 strongly.
template <typename T>
struct FaceData {
    VoxelDomain::Ptr dom;
    std::array<std::vector<T>, 3> comp;

    static FaceData zeros(VoxelDomain::Ptr d) {
        FaceData f;
        f.dom = std::move(d);
        for (int dir = 0; dir < 3; ++dir) f.comp[dir].assign(f.dom->face_count(dir), T{});
        return f;
    }
    T& at(int dir, int i, int j, int k) { return comp[dir][dom->face_index(dir, i, j, k)]; }
    const T& at(int dir, int i, int j, int k) const {
        return comp[dir][dom->face_index(dir, i, j, k)];
    }
};

using FaceField = FaceData<double>;  // magnetic potential A
using CFaceField = FaceData<cplx>;   // covariant gradients

template <typename T>
struct EdgeData {
    VoxelDomain::Ptr dom;
    std::array<std::vector<T>, 3> comp;

    static EdgeData zeros(VoxelDomain::Ptr d) {
        EdgeData f;
        f.dom = std::move(d);
        for (int dir = 0; dir < 3; ++dir) f.comp[dir].assign(f.dom->edge_count(dir), T{});
        return f;
    }
};

using EdgeField = EdgeData<double>;  // curls, applied-field samples

// ---- small linear-algebra helpers (fixed-order, deterministic) ----

inline void check_same_domain(const VoxelDomain::Ptr& a, const VoxelDomain::Ptr& b) {
    if (a.get() != b.get() && a->content_hash() != b->content_hash())
        throw std::invalid_argument("field layout mismatch: different domains");
}

template <typename FieldA, typename FieldB>
void check_same_domain(const FieldA& a, const FieldB& b) {
    check_same_domain(a.dom, b.dom);
}

template <typename T>
void axpy(double alpha, const CenterData<T>& x, CenterData<T>& y) {
    for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += alpha * x.v[i];
}

template <typename T>
void axpy(double alpha, const FaceData<T>& x, FaceData<T>& y) {
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < y.comp[d].size(); ++i) y.comp[d][i] += alpha * x.comp[d][i];
}

template <typename T>
void scale(CenterData<T>& x, double a) {
    for (auto& e : x.v) e *= a;
}

template <typename T>
void scale(FaceData<T>& x, double a) {
    for (int d = 0; d < 3; ++d)
        for (auto& e : x.comp[d]) e *= a;
}

// External applied magnetic field H. Either identically zero, a constant
// vector, or an analytic profile. Sampling helpers place tangential
// components on grid edges and normal components on grid faces.
class AppliedField {
public:
    AppliedField() : fn_(nullptr), div_free_(true), zero_(true) {}

    static AppliedField zero() { return AppliedField(); }

    static AppliedField constant(Vec3d h) {
        AppliedField f;
        f.zero_ = (h.x == 0.0 && h.y == 0.0 && h.z == 0.0);
        f.const_ = h;
        f.is_const_ = true;
        f.div_free_ = true;
        return f;
    }

    static AppliedField analytic(std::function<Vec3d(Vec3d)> fn, bool divergence_free) {
        AppliedField f;
        f.fn_ = std::move(fn);
        f.zero_ = false;
        f.is_const_ = false;
        f.div_free_ = divergence_free;
        return f;
    }

    bool is_zero() const { return zero_; }
    bool divergence_free() const { return div_free_; }

    Vec3d eval(Vec3d p) const {
        if (zero_) return {0, 0, 0};
        if (is_const_) return const_;
        return fn_(p);
    }

    // component along each edge direction, at edge midpoints of all active
    // (interior + boundary) edges
    EdgeField sample_edges(const VoxelDomain::Ptr& dom) const {
        EdgeField e = EdgeField::zeros(dom);
        if (zero_) return e;
        for (int dir = 0; dir < 3; ++dir) {
            auto fill = [&](const std::vector<std::size_t>& idxs) {
                for (std::size_t idx : idxs) {
                    int i, j, k;
                    dom->decode_edge(dir, idx, i, j, k);
                    const Vec3d p = dom->edge_center(dir, i, j, k);
                    e.comp[dir][idx] = eval(p)[dir];
                }
            };
            fill(dom->interior_edges(dir));
            fill(dom->boundary_edges(dir));
        }
        return e;
    }

    FaceField sample_faces(const VoxelDomain::Ptr& dom) const {
        FaceField f = FaceField::zeros(dom);
        if (zero_) return f;
        for (int dir = 0; dir < 3; ++dir) {
            auto fill = [&](const std::vector<std::size_t>& idxs) {
                for (std::size_t idx : idxs) {
                    int i, j, k;
                    dom->decode_face(dir, idx, i, j, k);
                    const Vec3d p = dom->face_center(dir, i, j, k);
                    f.comp[dir][idx] = eval(p)[dir];
                }
            };
            fill(dom->interior_faces(dir));
            fill(dom->boundary_faces(dir));
        }
        return f;
    }

private:
    std::function<Vec3d(Vec3d)> fn_;
    Vec3d const_{};
    bool is_const_ = false;
    bool div_free_ = true;
    bool zero_ = true;
};

// seeded random fields used by tests and default initial data

inline CenterField random_psi(const VoxelDomain::Ptr& dom, std::uint64_t seed) {
    CenterField f = CenterField::zeros(dom);
    Rng rng(seed);
    for (std::size_t c : dom->inside_cells()) f.v[c] = rng.unit_disk();
    return f;
}

inline FaceField random_face_field(const VoxelDomain::Ptr& dom, std::uint64_t seed,
                                   double lo = -1.0, double hi = 1.0) {
    FaceField f = FaceField::zeros(dom);
    Rng rng(seed);
    for (int d = 0; d < 3; ++d)
        for (std::size_t idx : dom->interior_faces(d)) f.comp[d][idx] = rng.uniform(lo, hi);
    return f;
}

inline ScalarField random_center_field(const VoxelDomain::Ptr& dom, std::uint64_t seed,
                                       double lo = -1.0, double hi = 1.0) {
    ScalarField f = ScalarField::zeros(dom);
    Rng rng(seed);
    for (std::size_t c : dom->inside_cells()) f.v[c] = rng.uniform(lo, hi);
    return f;
}

}  // namespace tdgl
