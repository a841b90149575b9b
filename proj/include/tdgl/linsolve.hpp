#pragma once

#include <cmath>

#include "tdgl/errors.hpp"
#include "tdgl/field.hpp"

namespace tdgl {

struct SolveOptions {
    double rel_tol = 1e-10;
    int max_iter = 10000;
    bool throw_on_fail = true;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = true;
};

namespace detail {

inline double dot_flat(const FaceField& a, const FaceField& b) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < a.comp[d].size(); ++i) s += a.comp[d][i] * b.comp[d][i];
    return s;
}

inline cplx dot_flat(const CenterField& a, const CenterField& b) {
    cplx s{};
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * std::conj(b.v[i]);
    return s;
}

inline double norm_flat(const FaceField& a) { return std::sqrt(dot_flat(a, a)); }
inline double norm_flat(const CenterField& a) { return std::sqrt(dot_flat(a, a).real()); }

inline void mul_elem(const FaceField& d, FaceField& x) {
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < x.comp[c].size(); ++i) x.comp[c][i] *= d.comp[c][i];
}

inline void mul_elem(const ScalarField& d, CenterField& x) {
    for (std::size_t i = 0; i < x.v.size(); ++i) x.v[i] *= d.v[i];
}

}  // namespace detail

// Preconditioned conjugate gradient for SPD face-field systems. `apply` maps
// a face field to the operator image; `inv_diag` holds the inverse diagonal
// (ones on non-DOF entries). Starts from the value already in x.
template <class ApplyOp>
SolveStats conjugate_gradient(ApplyOp&& apply, const FaceField& rhs, FaceField& x,
                              const FaceField& inv_diag, const SolveOptions& opt = {}) {
    using detail::dot_flat;
    using detail::norm_flat;
    SolveStats st;
    const double bnorm = norm_flat(rhs);
    if (bnorm == 0.0) {
        x = FaceField::zeros(rhs.dom);
        return st;
    }
    FaceField r = rhs;
    {
        FaceField ax = FaceField::zeros(x.dom);
        apply(x, ax);
        axpy(-1.0, ax, r);
    }
    double rnorm = norm_flat(r);
    if (rnorm <= opt.rel_tol * bnorm) {
        st.relative_residual = rnorm / bnorm;
        return st;
    }
    FaceField z = r;
    detail::mul_elem(inv_diag, z);
    FaceField p = z;
    FaceField q = FaceField::zeros(x.dom);
    double rz = dot_flat(r, z);
    for (int it = 1; it <= opt.max_iter; ++it) {
        apply(p, q);
        const double pq = dot_flat(p, q);
        const double alpha = rz / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        rnorm = norm_flat(r);
        st.iterations = it;
        if (rnorm <= opt.rel_tol * bnorm) {
            st.relative_residual = rnorm / bnorm;
            return st;
        }
        z = r;
        detail::mul_elem(inv_diag, z);
        const double rz_new = dot_flat(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int d = 0; d < 3; ++d)
            for (std::size_t i = 0; i < p.comp[d].size(); ++i)
                p.comp[d][i] = z.comp[d][i] + beta * p.comp[d][i];
    }
    st.converged = false;
    st.relative_residual = rnorm / bnorm;
    if (opt.throw_on_fail)
        throw SolverError("conjugate gradient did not converge", st.relative_residual,
                          st.iterations);
    return st;
}

// Preconditioned BiCGStab for the complex center-field systems arising from
// the order-parameter update (Hermitian positive definite plus an imaginary
// diagonal). Starts from the value already in x.
template <class ApplyOp>
SolveStats bicgstab(ApplyOp&& apply, const CenterField& rhs, CenterField& x,
                    const ScalarField& inv_diag, const SolveOptions& opt = {}) {
    using detail::dot_flat;
    using detail::norm_flat;
    SolveStats st;
    const double bnorm = norm_flat(rhs);
    if (bnorm == 0.0) {
        x = CenterField::zeros(rhs.dom);
        return st;
    }
    CenterField r = rhs;
    {
        CenterField ax = CenterField::zeros(x.dom);
        apply(x, ax);
        for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] -= ax.v[i];
    }
    double rnorm = norm_flat(r);
    if (rnorm <= opt.rel_tol * bnorm) {
        st.relative_residual = rnorm / bnorm;
        return st;
    }
    CenterField r0 = r;
    CenterField p = CenterField::zeros(x.dom);
    CenterField v = CenterField::zeros(x.dom);
    CenterField phat = CenterField::zeros(x.dom);
    CenterField shat = CenterField::zeros(x.dom);
    CenterField t = CenterField::zeros(x.dom);
    cplx rho_prev = 1.0, alpha = 1.0, omega = 1.0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        cplx rho = dot_flat(r0, r);
        if (std::abs(rho) < 1e-300) {  // serious breakdown; restart shadow residual
            r0 = r;
            rho = dot_flat(r0, r);
            if (std::abs(rho) < 1e-300) break;
        }
        if (it == 1) {
            p = r;
        } else {
            const cplx beta = (rho / rho_prev) * (alpha / omega);
            for (std::size_t i = 0; i < p.v.size(); ++i)
                p.v[i] = r.v[i] + beta * (p.v[i] - omega * v.v[i]);
        }
        phat = p;
        detail::mul_elem(inv_diag, phat);
        apply(phat, v);
        alpha = rho / dot_flat(r0, v);
        CenterField& s = r;  // s overwrites r in-place
        for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] -= alpha * v.v[i];
        double snorm = norm_flat(s);
        st.iterations = it;
        if (snorm <= opt.rel_tol * bnorm) {
            for (std::size_t i = 0; i < x.v.size(); ++i) x.v[i] += alpha * phat.v[i];
            st.relative_residual = snorm / bnorm;
            return st;
        }
        shat = s;
        detail::mul_elem(inv_diag, shat);
        apply(shat, t);
        omega = dot_flat(s, t) / dot_flat(t, t).real();
        for (std::size_t i = 0; i < x.v.size(); ++i)
            x.v[i] += alpha * phat.v[i] + omega * shat.v[i];
        for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] -= omega * t.v[i];
        rnorm = norm_flat(r);
        if (rnorm <= opt.rel_tol * bnorm) {
            st.relative_residual = rnorm / bnorm;
            return st;
        }
        rho_prev = rho;
    }
    st.converged = false;
    st.relative_residual = rnorm / bnorm;
    if (opt.throw_on_fail)
        throw SolverError("bicgstab did not converge", st.relative_residual, st.iterations);
    return st;
}

}  // namespace tdgl
