#include "tdgl/mms.hpp"

#include <cmath>

namespace tdgl {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double wx(const Vec3d& p) { return std::sin(kPi * p.x) * std::cos(kPi * p.y); }
double wy(const Vec3d& p) { return -std::cos(kPi * p.x) * std::sin(kPi * p.y); }

double w_comp(int dir, const Vec3d& p) {
    if (dir == 0) return wx(p);
    if (dir == 1) return wy(p);
    return 0.0;
}

}  // namespace

CenterField ManufacturedSolution::psi_exact(const VoxelDomain::Ptr& dom, double t) const {
    CenterField f = CenterField::zeros(dom);
    const double amp = 0.5 * std::exp(-t);
    for (std::size_t c : dom->inside_cells()) {
        const int i = static_cast<int>(c % dom->nx());
        const int j = static_cast<int>((c / dom->nx()) % dom->ny());
        const int k = static_cast<int>(c / (static_cast<std::size_t>(dom->nx()) * dom->ny()));
        f.v[c] = amp * std::cos(kPi * dom->cell_center(i, j, k).x);
    }
    return f;
}

FaceField ManufacturedSolution::A_exact(const VoxelDomain::Ptr& dom, double t) const {
    FaceField f = FaceField::zeros(dom);
    const double st = std::sin(t);
    for (int dir = 0; dir < 3; ++dir)
        for (std::size_t idx : dom->interior_faces(dir)) {
            int i, j, k;
            dom->decode_face(dir, idx, i, j, k);
            f.comp[dir][idx] = st * w_comp(dir, dom->face_center(dir, i, j, k));
        }
    return f;
}

CenterField ManufacturedSolution::psi_forcing(const VoxelDomain::Ptr& dom, double t) const {
    CenterField f = CenterField::zeros(dom);
    const double st = std::sin(t);
    const double amp = 0.5 * std::exp(-t);
    for (std::size_t c : dom->inside_cells()) {
        const int i = static_cast<int>(c % dom->nx());
        const int j = static_cast<int>((c / dom->nx()) % dom->ny());
        const int k = static_cast<int>(c / (static_cast<std::size_t>(dom->nx()) * dom->ny()));
        const Vec3d p = dom->cell_center(i, j, k);
        const double psi = amp * std::cos(kPi * p.x);
        const double w1 = wx(p), w2 = wy(p);
        // eta d_t psi + (i/k grad + A)^2 psi + (|psi|^2 - 1) psi, with
        // div A = 0 so the gauge-coupling term vanishes
        const double real_part = (-eta + kPi * kPi / (kappa * kappa)) * psi +
                                 st * st * (w1 * w1 + w2 * w2) * psi +
                                 (psi * psi - 1.0) * psi;
        const double imag_part =
            (2.0 / kappa) * st * (-0.5 * std::exp(-t) * kPi) * sq(std::sin(kPi * p.x)) *
            std::cos(kPi * p.y);
        f.v[c] = cplx(real_part, imag_part);
    }
    return f;
}

FaceField ManufacturedSolution::A_forcing(const VoxelDomain::Ptr& dom, double t) const {
    FaceField f = FaceField::zeros(dom);
    const double st = std::sin(t), ct = std::cos(t);
    const double e2t = std::exp(-2.0 * t);
    for (int dir = 0; dir < 3; ++dir)
        for (std::size_t idx : dom->interior_faces(dir)) {
            int i, j, k;
            dom->decode_face(dir, idx, i, j, k);
            const Vec3d p = dom->face_center(dir, i, j, k);
            // d_t A + curl curl A - grad div A + |psi|^2 A  (psi real)
            const double coeff =
                ct + 2.0 * kPi * kPi * st + 0.25 * e2t * sq(std::cos(kPi * p.x)) * st;
            f.comp[dir][idx] = coeff * w_comp(dir, p);
        }
    return f;
}

}  // namespace tdgl
