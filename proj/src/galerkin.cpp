#include "tdgl/galerkin.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "tdgl/errors.hpp"
#include "tdgl/util.hpp"

namespace tdgl {

FaceDofMap FaceDofMap::build(const VoxelDomain& d) {
    FaceDofMap m;
    std::int64_t next = 0;
    for (int dir = 0; dir < 3; ++dir) {
        m.face_to_dof[dir].assign(d.face_count(dir), -1);
        for (std::size_t idx : d.interior_faces(dir)) {
            m.face_to_dof[dir][idx] = next++;
            m.dof_to_face.emplace_back(dir, idx);
        }
    }
    return m;
}

namespace {

struct Triplet {
    std::int32_t r, c;
    double v;
};

// stencil entry: (dir, face linear index, coefficient)
struct StencilEntry {
    int dir;
    std::size_t idx;
    double coeff;
};

}  // namespace

CurlDivOperator CurlDivOperator::assemble(VoxelDomain::Ptr dom) {
    CurlDivOperator op;
    op.dom_ = std::move(dom);
    const VoxelDomain& d = *op.dom_;
    op.map_ = FaceDofMap::build(d);
    const Vec3d h = d.spacing();

    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(op.map_.size()) * 24);

    auto dof = [&](int dir, std::size_t idx) { return op.map_.face_to_dof[dir][idx]; };

    // identity block
    for (int i = 0; i < op.map_.size(); ++i) trip.push_back({i, i, 1.0});

    // (curl u, curl v) over interior edges; all four stencil faces of an
    // interior edge are interior faces
    StencilEntry st[4];
    for (int dir = 0; dir < 3; ++dir) {
        for (std::size_t idx : d.interior_edges(dir)) {
            int i, j, k;
            d.decode_edge(dir, idx, i, j, k);
            if (dir == 0) {
                st[0] = {2, d.face_index(2, i, j, k), 1.0 / h.y};
                st[1] = {2, d.face_index(2, i, j - 1, k), -1.0 / h.y};
                st[2] = {1, d.face_index(1, i, j, k), -1.0 / h.z};
                st[3] = {1, d.face_index(1, i, j, k - 1), 1.0 / h.z};
            } else if (dir == 1) {
                st[0] = {0, d.face_index(0, i, j, k), 1.0 / h.z};
                st[1] = {0, d.face_index(0, i, j, k - 1), -1.0 / h.z};
                st[2] = {2, d.face_index(2, i, j, k), -1.0 / h.x};
                st[3] = {2, d.face_index(2, i - 1, j, k), 1.0 / h.x};
            } else {
                st[0] = {1, d.face_index(1, i, j, k), 1.0 / h.x};
                st[1] = {1, d.face_index(1, i - 1, j, k), -1.0 / h.x};
                st[2] = {0, d.face_index(0, i, j, k), -1.0 / h.y};
                st[3] = {0, d.face_index(0, i, j - 1, k), 1.0 / h.y};
            }
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const auto ra = dof(st[a].dir, st[a].idx);
                    const auto rb = dof(st[b].dir, st[b].idx);
                    trip.push_back({static_cast<std::int32_t>(ra), static_cast<std::int32_t>(rb),
                                    st[a].coeff * st[b].coeff});
                }
        }
    }

    // (div u, div v) over inside cells; boundary faces carry zero values and
    // are skipped
    for (int kk = 0; kk < d.nz(); ++kk)
        for (int jj = 0; jj < d.ny(); ++jj)
            for (int ii = 0; ii < d.nx(); ++ii) {
                if (!d.inside(ii, jj, kk)) continue;
                StencilEntry cs[6] = {
                    {0, d.face_index(0, ii + 1, jj, kk), 1.0 / h.x},
                    {0, d.face_index(0, ii, jj, kk), -1.0 / h.x},
                    {1, d.face_index(1, ii, jj + 1, kk), 1.0 / h.y},
                    {1, d.face_index(1, ii, jj, kk), -1.0 / h.y},
                    {2, d.face_index(2, ii, jj, kk + 1), 1.0 / h.z},
                    {2, d.face_index(2, ii, jj, kk), -1.0 / h.z},
                };
                std::int64_t ids[6];
                for (int a = 0; a < 6; ++a) ids[a] = dof(cs[a].dir, cs[a].idx);
                for (int a = 0; a < 6; ++a) {
                    if (ids[a] < 0) continue;
                    for (int b = 0; b < 6; ++b) {
                        if (ids[b] < 0) continue;
                        trip.push_back({static_cast<std::int32_t>(ids[a]),
                                        static_cast<std::int32_t>(ids[b]),
                                        cs[a].coeff * cs[b].coeff});
                    }
                }
            }

    std::sort(trip.begin(), trip.end(), [](const Triplet& a, const Triplet& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });

    const int n = op.map_.size();
    op.row_ptr_.assign(n + 1, 0);
    for (std::size_t t = 0; t < trip.size();) {
        std::size_t u = t;
        double acc = 0.0;
        while (u < trip.size() && trip[u].r == trip[t].r && trip[u].c == trip[t].c)
            acc += trip[u++].v;
        op.col_.push_back(trip[t].c);
        op.val_.push_back(acc);
        op.row_ptr_[trip[t].r + 1]++;
        t = u;
    }
    for (int i = 0; i < n; ++i) op.row_ptr_[i + 1] += op.row_ptr_[i];
    return op;
}

void CurlDivOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
    const int n = map_.size();
    out.assign(n, 0.0);
    for (int r = 0; r < n; ++r) {
        double acc = 0.0;
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            acc += val_[p] * u[col_[p]];
        out[r] = acc;
    }
}

std::vector<double> CurlDivOperator::diagonal() const {
    const int n = map_.size();
    std::vector<double> d(n, 0.0);
    for (int r = 0; r < n; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            if (col_[p] == r) d[r] += val_[p];
    return d;
}

FaceField CurlDivOperator::to_field(const std::vector<double>& u) const {
    FaceField f = FaceField::zeros(dom_);
    for (std::size_t i = 0; i < map_.dof_to_face.size(); ++i) {
        const auto& [dir, idx] = map_.dof_to_face[i];
        f.comp[dir][idx] = u[i];
    }
    return f;
}

std::vector<double> CurlDivOperator::from_field(const FaceField& f) const {
    check_same_domain(f.dom, dom_);
    std::vector<double> u(map_.size());
    for (std::size_t i = 0; i < map_.dof_to_face.size(); ++i) {
        const auto& [dir, idx] = map_.dof_to_face[i];
        u[i] = f.comp[dir][idx];
    }
    return u;
}

std::vector<double> CurlDivOperator::dense_row_major() const {
    const int n = map_.size();
    if (n > 3000) throw std::logic_error("dense fallback limited to 3000 DOFs");
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            m[static_cast<std::size_t>(r) * n + col_[p]] = val_[p];
    return m;
}

double CurlDivOperator::max_abs_entry() const {
    double m = 0.0;
    for (double v : val_) m = std::max(m, std::abs(v));
    return m;
}

double CurlDivOperator::max_asymmetry() const {
    // scan CSR for |a_ij - a_ji|
    double worst = 0.0;
    const int n = map_.size();
    for (int r = 0; r < n; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            const int c = col_[p];
            double mirror = 0.0;
            for (std::int64_t q = row_ptr_[c]; q < row_ptr_[c + 1]; ++q)
                if (col_[q] == r) {
                    mirror = val_[q];
                    break;
                }
            worst = std::max(worst, std::abs(val_[p] - mirror));
        }
    return worst;
}

namespace {

double rdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double rnorm(const std::vector<double>& a) { return std::sqrt(rdot(a, a)); }

void raxpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// CG on raw DOF vectors for the shifted system (M - sigma I) x = b
int shifted_cg(const CurlDivOperator& op, double sigma, const std::vector<double>& b,
               std::vector<double>& x, double tol, int max_iter) {
    const int n = op.dofs();
    std::vector<double> inv_diag = op.diagonal();
    for (auto& d : inv_diag) d = 1.0 / (d - sigma);
    const double bn = rnorm(b);
    x.assign(n, 0.0);
    if (bn == 0.0) return 0;
    std::vector<double> r = b, z(n), p(n), q(n), tmp(n);
    for (int i = 0; i < n; ++i) z[i] = r[i] * inv_diag[i];
    p = z;
    double rz = rdot(r, z);
    for (int it = 1; it <= max_iter; ++it) {
        op.apply(p, q);
        raxpy(-sigma, p, q);
        const double alpha = rz / rdot(p, q);
        raxpy(alpha, p, x);
        raxpy(-alpha, q, r);
        if (rnorm(r) <= tol * bn) return it;
        for (int i = 0; i < n; ++i) z[i] = r[i] * inv_diag[i];
        const double rz2 = rdot(r, z);
        const double beta = rz2 / rz;
        rz = rz2;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("shift-invert inner CG did not converge", rnorm(r) / bn, max_iter);
}

void orthogonalize_against(std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) {
            const double c = rdot(w, q);
            raxpy(-c, q, w);
        }
}

double eig_residual(const CurlDivOperator& op, const std::vector<double>& y, double lambda) {
    std::vector<double> my;
    op.apply(y, my);
    raxpy(-lambda, y, my);
    return rnorm(my) / std::max(1.0, std::abs(lambda));
}

GalerkinBasis package_basis(const CurlDivOperator& op, std::vector<double> vals,
                            std::vector<std::vector<double>> vecs) {
    // incoming vectors are l2-orthonormal; mass-orthonormalize by uniform
    // scaling with the cell volume
    const double s = 1.0 / std::sqrt(op.mass_weight());
    GalerkinBasis b;
    b.n = static_cast<int>(vals.size());
    b.eigenvalues = std::move(vals);
    b.domain_hash = op.domain()->content_hash();
    double orth = 0.0, resid = 0.0;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double g = rdot(vecs[i], vecs[j]) - (i == j ? 1.0 : 0.0);
            orth = std::max(orth, std::abs(g));
        }
        resid = std::max(resid, eig_residual(op, vecs[i], b.eigenvalues[i]));
        std::vector<double> scaled = vecs[i];
        for (auto& v : scaled) v *= s;
        b.vectors.push_back(op.to_field(scaled));
    }
    b.orthonormality_error = orth;
    b.max_relative_residual = resid;
    return b;
}

GalerkinBasis eig_dense(const CurlDivOperator& op, int n) {
    const int dofs = op.dofs();
    const std::vector<double> m = op.dense_row_major();
    Eigen::MatrixXd M(dofs, dofs);
    for (int r = 0; r < dofs; ++r)
        for (int c = 0; c < dofs; ++c) M(r, c) = m[static_cast<std::size_t>(r) * dofs + c];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw SolverError("dense eigensolver failed", 0.0, 0);
    std::vector<double> vals(n);
    std::vector<std::vector<double>> vecs(n, std::vector<double>(dofs));
    for (int i = 0; i < n; ++i) {
        vals[i] = es.eigenvalues()(i);
        for (int r = 0; r < dofs; ++r) vecs[i][r] = es.eigenvectors()(r, i);
    }
    return package_basis(op, std::move(vals), std::move(vecs));
}

GalerkinBasis eig_iterative(const CurlDivOperator& op, int n, const EigOptions& opts) {
    const int dofs = op.dofs();
    const double sigma = 1.0 - 1e-6;  // just below the coercivity floor
    std::vector<std::vector<double>> found;
    std::vector<double> found_vals;
    Rng rng(opts.seed);
    int m = std::min(dofs, std::max(2 * n + 30, 60));
    double last_resid = 0.0;

    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        if (static_cast<int>(found.size()) >= n) break;

        std::vector<double> v(dofs);
        for (auto& x : v) x = rng.uniform(-1.0, 1.0);
        orthogonalize_against(v, found);
        const double vn = rnorm(v);
        if (vn < 1e-12) continue;
        for (auto& x : v) x /= vn;

        std::vector<std::vector<double>> V;
        V.push_back(v);
        std::vector<double> alphas, betas;
        for (int j = 0; j < m; ++j) {
            std::vector<double> w;
            shifted_cg(op, sigma, V[j], w, opts.cg_tol, 20000);
            if (j > 0) raxpy(-betas[j - 1], V[j - 1], w);
            const double a = rdot(w, V[j]);
            raxpy(-a, V[j], w);
            orthogonalize_against(w, V);
            orthogonalize_against(w, found);
            alphas.push_back(a);
            const double bn = rnorm(w);
            if (bn < 1e-12) break;
            betas.push_back(bn);
            for (auto& x : w) x /= bn;
            V.push_back(std::move(w));
        }

        const int mm = static_cast<int>(alphas.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mm, mm);
        for (int i = 0; i < mm; ++i) {
            T(i, i) = alphas[i];
            if (i + 1 < mm) T(i, i + 1) = T(i + 1, i) = betas[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

        // largest theta of (M - sigma I)^{-1} corresponds to the smallest
        // eigenvalue of M; accept converged Ritz pairs in that order and stop
        // at the first unconverged one so no smaller eigenvalue is skipped
        bool accepted_any = false;
        for (int pos = mm - 1; pos >= 0; --pos) {
            if (static_cast<int>(found.size()) >= n) break;
            const double theta = es.eigenvalues()(pos);
            if (theta <= 0.0) break;
            const double lambda = sigma + 1.0 / theta;
            std::vector<double> y(dofs, 0.0);
            for (int j = 0; j < mm; ++j) raxpy(es.eigenvectors()(j, pos), V[j], y);
            const double yn = rnorm(y);
            if (yn < 1e-12) continue;
            for (auto& x : y) x /= yn;
            const double resid = eig_residual(op, y, lambda);
            last_resid = resid;
            if (resid <= opts.residual_tol) {
                orthogonalize_against(y, found);
                const double n2 = rnorm(y);
                if (n2 < 1e-8) continue;  // duplicate of an accepted vector
                for (auto& x : y) x /= n2;
                found.push_back(std::move(y));
                found_vals.push_back(lambda);
                accepted_any = true;
            } else {
                break;
            }
        }

        if (!accepted_any) {
            if (m >= dofs)
                throw SolverError("shift-invert Lanczos did not converge", last_resid, restart);
            m = std::min(dofs, 2 * m);
        }
    }

    if (static_cast<int>(found.size()) < n)
        throw SolverError("shift-invert Lanczos: too few converged eigenpairs", last_resid,
                          opts.max_restarts);

    // sort ascending by eigenvalue
    std::vector<int> order(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return found_vals[a] < found_vals[b]; });
    std::vector<double> vals;
    std::vector<std::vector<double>> vecs;
    for (int i = 0; i < n; ++i) {
        vals.push_back(found_vals[order[i]]);
        vecs.push_back(std::move(found[order[i]]));
    }
    return package_basis(op, std::move(vals), std::move(vecs));
}

}  // namespace

GalerkinBasis eigenbasis_M(const CurlDivOperator& op, int n, const EigOptions& opts) {
    if (n < 1 || n > op.dofs())
        throw std::invalid_argument("basis size must satisfy 1 <= N <= face DOF count");
    EigMethod method = opts.method;
    if (method == EigMethod::Auto)
        method = (op.dofs() <= 3000 && (op.dofs() <= 600 || n > op.dofs() / 8))
                     ? EigMethod::Dense
                     : EigMethod::Iterative;
    if (method == EigMethod::Dense && op.dofs() > 3000) method = EigMethod::Iterative;
    return method == EigMethod::Dense ? eig_dense(op, n) : eig_iterative(op, n, opts);
}

Projection project_onto_XN(const FaceField& A0, const GalerkinBasis& basis,
                           const CurlDivOperator& op) {
    check_same_domain(A0.dom, op.domain());
    if (basis.domain_hash != op.domain()->content_hash())
        throw std::invalid_argument("basis/domain mismatch");
    const std::vector<double> u0 = op.from_field(A0);
    std::vector<double> mu0;
    op.apply(u0, mu0);
    const double vol = op.mass_weight();
    Projection p;
    p.coefficients.resize(basis.n);
    p.reconstruction = FaceField::zeros(A0.dom);
    for (int i = 0; i < basis.n; ++i) {
        const std::vector<double> ai = op.from_field(basis.vectors[i]);
        p.coefficients[i] = vol * rdot(mu0, ai) / basis.eigenvalues[i];
        axpy(p.coefficients[i], basis.vectors[i], p.reconstruction);
    }
    return p;
}

namespace {
constexpr std::uint64_t kBasisMagic = 0x3153414242'4c444754ull;  // arbitrary tag
}

void GalerkinBasis::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RecordError("cannot open basis file for writing: " + path);
    auto w = [&](const void* p, std::size_t sz) { f.write(static_cast<const char*>(p), sz); };
    const std::uint32_t version = 1;
    const std::int64_t dofs =
        vectors.empty() ? 0
                        : static_cast<std::int64_t>([&] {
                              std::size_t c = 0;
                              for (int d = 0; d < 3; ++d)
                                  c += vectors[0].dom->interior_faces(d).size();
                              return c;
                          }());
    w(&kBasisMagic, 8);
    w(&version, 4);
    w(&domain_hash, 8);
    const std::int32_t nn = n;
    w(&nn, 4);
    w(&dofs, 8);
    w(&orthonormality_error, 8);
    w(&max_relative_residual, 8);
    w(eigenvalues.data(), eigenvalues.size() * 8);
    // payload in DOF order (interior x-faces, then y, then z)
    for (const auto& vec : vectors) {
        for (int d = 0; d < 3; ++d)
            for (std::size_t idx : vec.dom->interior_faces(d)) w(&vec.comp[d][idx], 8);
    }
    if (!f) throw RecordError("basis write failed: " + path);
}

GalerkinBasis GalerkinBasis::load(const std::string& path, const VoxelDomain::Ptr& dom) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw RecordError("cannot open basis file: " + path);
    auto r = [&](void* p, std::size_t sz) {
        f.read(static_cast<char*>(p), sz);
        if (!f) throw RecordError("basis file truncated: " + path);
    };
    std::uint64_t magic = 0;
    std::uint32_t version = 0;
    GalerkinBasis b;
    r(&magic, 8);
    if (magic != kBasisMagic) throw RecordError("not a basis file: " + path);
    r(&version, 4);
    r(&b.domain_hash, 8);
    std::int32_t nn = 0;
    std::int64_t dofs = 0;
    r(&nn, 4);
    r(&dofs, 8);
    r(&b.orthonormality_error, 8);
    r(&b.max_relative_residual, 8);
    if (b.domain_hash != dom->content_hash())
        throw RecordError("basis file belongs to a different domain: " + path);
    b.n = nn;
    b.eigenvalues.resize(nn);
    r(b.eigenvalues.data(), static_cast<std::size_t>(nn) * 8);
    std::size_t expect = 0;
    for (int d = 0; d < 3; ++d) expect += dom->interior_faces(d).size();
    if (dofs != static_cast<std::int64_t>(expect))
        throw RecordError("basis DOF count does not match domain: " + path);
    for (int i = 0; i < nn; ++i) {
        FaceField v = FaceField::zeros(dom);
        for (int d = 0; d < 3; ++d)
            for (std::size_t idx : dom->interior_faces(d)) r(&v.comp[d][idx], 8);
        b.vectors.push_back(std::move(v));
    }
    return b;
}

}  // namespace tdgl
