#include "tdgl/ops.hpp"

#include <cmath>

namespace tdgl {

namespace {

template <typename T>
FaceData<T> grad_impl(const CenterData<T>& f) {
    const auto& dom = f.dom;
    FaceData<T> g = FaceData<T>::zeros(dom);
    const Vec3d h = dom->spacing();
    for (int dir = 0; dir < 3; ++dir) {
        const double inv_h = 1.0 / h[dir];
        for (std::size_t idx : dom->interior_faces(dir)) {
            int i, j, k;
            dom->decode_face(dir, idx, i, j, k);
            int ni = i, nj = j, nk = k;
            if (dir == 0) ni = i - 1;
            if (dir == 1) nj = j - 1;
            if (dir == 2) nk = k - 1;
            g.comp[dir][idx] = (f.at(i, j, k) - f.at(ni, nj, nk)) * inv_h;
        }
    }
    return g;
}

template <typename T>
CenterData<T> div_impl(const FaceData<T>& A) {
    const auto& dom = A.dom;
    CenterData<T> d = CenterData<T>::zeros(dom);
    const Vec3d h = dom->spacing();
    const int nx = dom->nx(), ny = dom->ny(), nz = dom->nz();
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (!dom->inside(i, j, k)) continue;
                T acc = (A.comp[0][dom->face_index(0, i + 1, j, k)] -
                         A.comp[0][dom->face_index(0, i, j, k)]) *
                        (1.0 / h.x);
                acc += (A.comp[1][dom->face_index(1, i, j + 1, k)] -
                        A.comp[1][dom->face_index(1, i, j, k)]) *
                       (1.0 / h.y);
                acc += (A.comp[2][dom->face_index(2, i, j, k + 1)] -
                        A.comp[2][dom->face_index(2, i, j, k)]) *
                       (1.0 / h.z);
                d.v[dom->cell_index(i, j, k)] = acc;
            }
    return d;
}

// curl stencil at one edge; assumes the edge is interior so all four faces
// referenced are in range
inline double edge_curl(const FaceField& A, const VoxelDomain& dom, int dir, int i, int j,
                        int k) {
    const Vec3d h = dom.spacing();
    switch (dir) {
        case 0:  // dAz/dy - dAy/dz
            return (A.comp[2][dom.face_index(2, i, j, k)] -
                    A.comp[2][dom.face_index(2, i, j - 1, k)]) /
                       h.y -
                   (A.comp[1][dom.face_index(1, i, j, k)] -
                    A.comp[1][dom.face_index(1, i, j, k - 1)]) /
                       h.z;
        case 1:  // dAx/dz - dAz/dx
            return (A.comp[0][dom.face_index(0, i, j, k)] -
                    A.comp[0][dom.face_index(0, i, j, k - 1)]) /
                       h.z -
                   (A.comp[2][dom.face_index(2, i, j, k)] -
                    A.comp[2][dom.face_index(2, i - 1, j, k)]) /
                       h.x;
        default:  // dAy/dx - dAx/dy
            return (A.comp[1][dom.face_index(1, i, j, k)] -
                    A.comp[1][dom.face_index(1, i - 1, j, k)]) /
                       h.x -
                   (A.comp[0][dom.face_index(0, i, j, k)] -
                    A.comp[0][dom.face_index(0, i, j - 1, k)]) /
                       h.y;
    }
}

}  // namespace

FaceField grad_center_to_face(const ScalarField& f) { return grad_impl(f); }
CFaceField grad_center_to_face(const CenterField& f) { return grad_impl(f); }
ScalarField div_face_to_center(const FaceField& A) { return div_impl(A); }
CenterField div_face_to_center(const CFaceField& A) { return div_impl(A); }

EdgeField curl_face_to_edge_zero(const FaceField& A) {
    const auto& dom = A.dom;
    EdgeField e = EdgeField::zeros(dom);
    for (int dir = 0; dir < 3; ++dir)
        for (std::size_t idx : dom->interior_edges(dir)) {
            int i, j, k;
            dom->decode_edge(dir, idx, i, j, k);
            e.comp[dir][idx] = edge_curl(A, *dom, dir, i, j, k);
        }
    return e;
}

EdgeField curl_face_to_edge(const FaceField& A, const AppliedField& H) {
    const auto& dom = A.dom;
    EdgeField e = curl_face_to_edge_zero(A);
    if (!H.is_zero()) {
        for (int dir = 0; dir < 3; ++dir)
            for (std::size_t idx : dom->boundary_edges(dir)) {
                int i, j, k;
                dom->decode_edge(dir, idx, i, j, k);
                e.comp[dir][idx] = H.eval(dom->edge_center(dir, i, j, k))[dir];
            }
    }
    return e;
}

FaceField curl_edge_to_face(const EdgeField& E) {
    const auto& dom = E.dom;
    FaceField f = FaceField::zeros(dom);
    const Vec3d h = dom->spacing();
    for (std::size_t idx : dom->interior_faces(0)) {
        int i, j, k;
        dom->decode_face(0, idx, i, j, k);
        f.comp[0][idx] = (E.comp[2][dom->edge_index(2, i, j + 1, k)] -
                          E.comp[2][dom->edge_index(2, i, j, k)]) /
                             h.y -
                         (E.comp[1][dom->edge_index(1, i, j, k + 1)] -
                          E.comp[1][dom->edge_index(1, i, j, k)]) /
                             h.z;
    }
    for (std::size_t idx : dom->interior_faces(1)) {
        int i, j, k;
        dom->decode_face(1, idx, i, j, k);
        f.comp[1][idx] = (E.comp[0][dom->edge_index(0, i, j, k + 1)] -
                          E.comp[0][dom->edge_index(0, i, j, k)]) /
                             h.z -
                         (E.comp[2][dom->edge_index(2, i + 1, j, k)] -
                          E.comp[2][dom->edge_index(2, i, j, k)]) /
                             h.x;
    }
    for (std::size_t idx : dom->interior_faces(2)) {
        int i, j, k;
        dom->decode_face(2, idx, i, j, k);
        f.comp[2][idx] = (E.comp[1][dom->edge_index(1, i + 1, j, k)] -
                          E.comp[1][dom->edge_index(1, i, j, k)]) /
                             h.x -
                         (E.comp[0][dom->edge_index(0, i, j + 1, k)] -
                          E.comp[0][dom->edge_index(0, i, j, k)]) /
                             h.y;
    }
    return f;
}

FaceField curlcurl_minus_graddiv(const FaceField& A, const AppliedField& H) {
    FaceField out = curl_edge_to_face(curl_face_to_edge(A, H));
    const FaceField gd = grad_center_to_face(div_face_to_center(A));
    axpy(-1.0, gd, out);
    return out;
}

CFaceField covariant_grad(const CenterField& psi, const FaceField& A, double kappa) {
    check_same_domain(psi.dom, A.dom);
    const auto& dom = psi.dom;
    CFaceField g = CFaceField::zeros(dom);
    const Vec3d h = dom->spacing();
    const cplx i_over_kappa(0.0, 1.0 / kappa);
    for (int dir = 0; dir < 3; ++dir) {
        const double inv_h = 1.0 / h[dir];
        for (std::size_t idx : dom->interior_faces(dir)) {
            int i, j, k;
            dom->decode_face(dir, idx, i, j, k);
            int ni = i, nj = j, nk = k;
            if (dir == 0) ni = i - 1;
            if (dir == 1) nj = j - 1;
            if (dir == 2) nk = k - 1;
            const cplx hi = psi.at(i, j, k);
            const cplx lo = psi.at(ni, nj, nk);
            g.comp[dir][idx] =
                i_over_kappa * ((hi - lo) * inv_h) + A.comp[dir][idx] * (0.5 * (hi + lo));
        }
    }
    return g;
}

CenterField covariant_laplacian(const CenterField& psi, const FaceField& A, double kappa) {
    const auto& dom = psi.dom;
    const CFaceField g = covariant_grad(psi, A, kappa);

    // adjoint application: (i/kappa) div(g) + avg^T(A .* g)
    CenterField out = CenterField::zeros(dom);
    const cplx i_over_kappa(0.0, 1.0 / kappa);
    {
        const CenterField dg = div_face_to_center(g);
        for (std::size_t c : dom->inside_cells()) out.v[c] = i_over_kappa * dg.v[c];
    }
    for (int dir = 0; dir < 3; ++dir) {
        for (std::size_t idx : dom->interior_faces(dir)) {
            int i, j, k;
            dom->decode_face(dir, idx, i, j, k);
            int ni = i, nj = j, nk = k;
            if (dir == 0) ni = i - 1;
            if (dir == 1) nj = j - 1;
            if (dir == 2) nk = k - 1;
            const cplx half = 0.5 * A.comp[dir][idx] * g.comp[dir][idx];
            out.v[dom->cell_index(i, j, k)] += half;
            out.v[dom->cell_index(ni, nj, nk)] += half;
        }
    }
    return out;
}

namespace {

template <typename T, typename Get>
T gathered_pairwise(const std::vector<std::size_t>& idxs, Get get) {
    std::vector<T> buf(idxs.size());
    for (std::size_t n = 0; n < idxs.size(); ++n) buf[n] = get(idxs[n]);
    return pairwise_sum(buf);
}

template <typename T>
T center_inner(const CenterData<T>& u, const CenterData<T>& v) {
    check_same_domain(u, v);
    const double vol = u.dom->cell_volume();
    auto term = [&](std::size_t c) {
        if constexpr (std::is_same_v<T, cplx>)
            return u.v[c] * std::conj(v.v[c]);
        else
            return u.v[c] * v.v[c];
    };
    return vol * gathered_pairwise<T>(u.dom->inside_cells(), term);
}

template <typename T>
T face_inner(const FaceData<T>& u, const FaceData<T>& v) {
    check_same_domain(u, v);
    const double vol = u.dom->cell_volume();
    T total{};
    for (int d = 0; d < 3; ++d) {
        auto term = [&](std::size_t f) {
            if constexpr (std::is_same_v<T, cplx>)
                return u.comp[d][f] * std::conj(v.comp[d][f]);
            else
                return u.comp[d][f] * v.comp[d][f];
        };
        total += gathered_pairwise<T>(u.dom->interior_faces(d), term);
    }
    return vol * total;
}

}  // namespace

double inner_product(const ScalarField& u, const ScalarField& v) { return center_inner(u, v); }
cplx inner_product(const CenterField& u, const CenterField& v) { return center_inner(u, v); }
double inner_product(const FaceField& u, const FaceField& v) { return face_inner(u, v); }
cplx inner_product(const CFaceField& u, const CFaceField& v) { return face_inner(u, v); }

double inner_product(const EdgeField& u, const EdgeField& v) {
    check_same_domain(u, v);
    const double vol = u.dom->cell_volume();
    double total = 0.0;
    for (int d = 0; d < 3; ++d)
        total += gathered_pairwise<double>(
            u.dom->interior_edges(d), [&](std::size_t e) { return u.comp[d][e] * v.comp[d][e]; });
    return vol * total;
}

double norm_l2(const ScalarField& u) { return std::sqrt(std::max(0.0, inner_product(u, u))); }
double norm_l2(const CenterField& u) {
    return std::sqrt(std::max(0.0, inner_product(u, u).real()));
}
double norm_l2(const FaceField& u) { return std::sqrt(std::max(0.0, inner_product(u, u))); }
double norm_l2(const CFaceField& u) {
    return std::sqrt(std::max(0.0, inner_product(u, u).real()));
}
double norm_l2(const EdgeField& u) { return std::sqrt(std::max(0.0, inner_product(u, u))); }

double max_abs(const CenterField& u) {
    double m = 0.0;
    for (std::size_t c : u.dom->inside_cells()) m = std::max(m, std::abs(u.v[c]));
    return m;
}

std::array<ScalarField, 3> face_to_center_average(const FaceField& A) {
    const auto& dom = A.dom;
    std::array<ScalarField, 3> out = {ScalarField::zeros(dom), ScalarField::zeros(dom),
                                      ScalarField::zeros(dom)};
    const int nx = dom->nx(), ny = dom->ny(), nz = dom->nz();
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (!dom->inside(i, j, k)) continue;
                const std::size_t c = dom->cell_index(i, j, k);
                out[0].v[c] = 0.5 * (A.comp[0][dom->face_index(0, i, j, k)] +
                                     A.comp[0][dom->face_index(0, i + 1, j, k)]);
                out[1].v[c] = 0.5 * (A.comp[1][dom->face_index(1, i, j, k)] +
                                     A.comp[1][dom->face_index(1, i, j + 1, k)]);
                out[2].v[c] = 0.5 * (A.comp[2][dom->face_index(2, i, j, k)] +
                                     A.comp[2][dom->face_index(2, i, j, k + 1)]);
            }
    return out;
}

}  // namespace tdgl
