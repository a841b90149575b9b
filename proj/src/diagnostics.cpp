#include "tdgl/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "tdgl/ops.hpp"

namespace tdgl {

EnergyBreakdown energy(const CenterField& psi, const FaceField& A, const AppliedField& H,
                       const PhysParams& params) {
    check_same_domain(psi, A);
    const auto& dom = psi.dom;
    const double vol = dom->cell_volume();
    EnergyBreakdown e;

    const CFaceField g = covariant_grad(psi, A, params.kappa);
    e.kinetic = 0.5 * sq(norm_l2(g));

    {
        std::vector<double> buf(dom->inside_cells().size());
        const auto& cells = dom->inside_cells();
        for (std::size_t n = 0; n < cells.size(); ++n)
            buf[n] = sq(std::norm(psi.v[cells[n]]) - 1.0);
        e.condensation = 0.25 * vol * pairwise_sum(buf);
    }

    {
        // curl A - H on interior edges; on boundary edges the inserted
        // natural condition makes the difference vanish identically
        const EdgeField ca = curl_face_to_edge_zero(A);
        const EdgeField he = H.sample_edges(dom);
        double acc = 0.0;
        for (int d = 0; d < 3; ++d) {
            const auto& idxs = dom->interior_edges(d);
            std::vector<double> buf(idxs.size());
            for (std::size_t n = 0; n < idxs.size(); ++n)
                buf[n] = sq(ca.comp[d][idxs[n]] - he.comp[d][idxs[n]]);
            acc += pairwise_sum(buf);
        }
        e.field = 0.5 * vol * acc;
    }

    {
        const ScalarField da = div_face_to_center(A);
        e.gauge = 0.5 * sq(norm_l2(da));
    }

    e.total = e.kinetic + e.condensation + e.field + e.gauge;
    return e;
}

std::vector<double> lyapunov_residual(const RunRecord& record, const PhysParams& params) {
    if (record.series.size() < 2)
        throw std::invalid_argument("record holds fewer than two consecutive states");
    const double dt = record.dt();
    std::vector<double> r;
    r.reserve(record.series.size() - 1);
    for (std::size_t n = 0; n + 1 < record.series.size(); ++n) {
        const SeriesRow& a = record.series[n];
        const SeriesRow& b = record.series[n + 1];
        const double val = (b.e_total - a.e_total) / dt + sq(b.da_l2) +
                           0.5 * params.eta * sq(b.dpsi_l2) -
                           0.5 * params.eta * sq(params.kappa) * sq(b.div_a_l2);
        r.push_back(val);
    }
    return r;
}

double max_positive_residual(const std::vector<double>& r) {
    double m = 0.0;
    for (double x : r) m = std::max(m, x);
    return m;
}

bool energy_envelope_holds(const RunRecord& record, const PhysParams& params, double eps) {
    if (record.series.empty()) return false;
    const double e0 = record.series.front().e_total;
    const double rate = params.eta * sq(params.kappa);
    for (const auto& row : record.series) {
        if (row.e_total > (e0 + eps) * std::exp(rate * row.t) + eps) return false;
    }
    return true;
}

BoundReport bound_monitor(const RunRecord& record) {
    BoundReport rep;
    for (const auto& row : record.series) {
        rep.max_abs_psi = std::max(rep.max_abs_psi, row.max_abs_psi);
        rep.excess.push_back(row.excess);
        rep.max_excess = std::max(rep.max_excess, row.excess);
    }
    return rep;
}

TestBank TestBank::build(const VoxelDomain::Ptr& dom) {
    constexpr double kPi = 3.14159265358979323846264338327950288;
    TestBank bank;
    const Vec3d L = dom->lengths();

    const int modes[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                             {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    for (const auto& m : modes) {
        CenterField f = CenterField::zeros(dom);
        for (std::size_t c : dom->inside_cells()) {
            const int i = static_cast<int>(c % dom->nx());
            const int j = static_cast<int>((c / dom->nx()) % dom->ny());
            const int k =
                static_cast<int>(c / (static_cast<std::size_t>(dom->nx()) * dom->ny()));
            const Vec3d p = dom->cell_center(i, j, k);
            f.v[c] = std::cos(m[0] * kPi * p.x / L.x) * std::cos(m[1] * kPi * p.y / L.y) *
                     std::cos(m[2] * kPi * p.z / L.z);
        }
        bank.center_tests.push_back(std::move(f));
    }

    // per direction: sin along the normal axis (vanishing normal trace on
    // the bounding box) times optional cosines transversally
    for (int dir = 0; dir < 3; ++dir) {
        for (int variant = 0; variant < 3; ++variant) {
            FaceField f = FaceField::zeros(dom);
            for (std::size_t idx : dom->interior_faces(dir)) {
                int i, j, k;
                dom->decode_face(dir, idx, i, j, k);
                const Vec3d p = dom->face_center(dir, i, j, k);
                const double coords[3] = {p.x / L.x, p.y / L.y, p.z / L.z};
                double val = std::sin(kPi * coords[dir]);
                if (variant == 1) val *= std::cos(kPi * coords[(dir + 1) % 3]);
                if (variant == 2) val *= std::cos(kPi * coords[(dir + 2) % 3]);
                f.comp[dir][idx] = val;
            }
            bank.face_tests.push_back(std::move(f));
        }
    }
    return bank;
}

cplx weak_residual_psi_single(const SimState& state, const SimState& state_next,
                              const PhysParams& params, double dt, const CenterField& phi,
                              Gauge gauge, const CenterField* forcing_psi) {
    const auto& dom = state.psi.dom;
    const CenterField& p1 = state_next.psi;
    const FaceField& a1 = state_next.A;

    CenterField dtpsi = p1;
    axpy(-1.0, state.psi, dtpsi);
    scale(dtpsi, 1.0 / dt);

    cplx r = params.eta * inner_product(dtpsi, phi);
    r += inner_product(covariant_grad(p1, a1, params.kappa),
                       covariant_grad(phi, a1, params.kappa));

    CenterField zero_order = CenterField::zeros(dom);
    ScalarField divA = ScalarField::zeros(dom);
    if (gauge == Gauge::Lorentz) divA = div_face_to_center(a1);
    for (std::size_t c : dom->inside_cells()) {
        cplx z = (std::norm(p1.v[c]) - 1.0) * p1.v[c];
        if (gauge == Gauge::Lorentz)
            z -= cplx(0.0, params.eta * params.kappa * divA.v[c]) * p1.v[c];
        zero_order.v[c] = z;
    }
    r += inner_product(zero_order, phi);
    if (forcing_psi) r -= inner_product(*forcing_psi, phi);
    return r;
}

double weak_residual_A_single(const SimState& state, const SimState& state_next,
                              const PhysParams& params, double dt, const FaceField& a,
                              Gauge gauge, const FaceField* forcing_A) {
    const auto& dom = state.A.dom;
    const CenterField& p1 = state_next.psi;
    const FaceField& a1 = state_next.A;

    FaceField dta = a1;
    axpy(-1.0, state.A, dta);
    scale(dta, 1.0 / dt);

    double r = inner_product(dta, a);
    r += inner_product(curl_face_to_edge_zero(a1), curl_face_to_edge_zero(a));
    if (gauge == Gauge::Lorentz)
        r += inner_product(div_face_to_center(a1), div_face_to_center(a));

    // supercurrent evaluated at the later state
    const CFaceField g = covariant_grad(p1, a1, params.kappa);
    FaceField s = FaceField::zeros(dom);
    for (int dir = 0; dir < 3; ++dir)
        for (std::size_t idx : dom->interior_faces(dir)) {
            int i, j, k;
            dom->decode_face(dir, idx, i, j, k);
            int ni = i, nj = j, nk = k;
            if (dir == 0) ni = i - 1;
            if (dir == 1) nj = j - 1;
            if (dir == 2) nk = k - 1;
            const cplx avg = 0.5 * (p1.at(i, j, k) + p1.at(ni, nj, nk));
            s.comp[dir][idx] = (std::conj(avg) * g.comp[dir][idx]).real();
        }
    r += inner_product(s, a);

    if (!params.applied.is_zero()) {
        const EdgeField he = params.applied.sample_edges(dom);
        r -= inner_product(he, curl_face_to_edge_zero(a));
    }
    if (forcing_A) r -= inner_product(*forcing_A, a);
    return r;
}

WeakResidual weak_residual(const SimState& state, const SimState& state_next,
                           const PhysParams& params, double dt, const TestBank& bank,
                           Gauge gauge, const CenterField* forcing_psi,
                           const FaceField* forcing_A) {
    WeakResidual wr;
    for (const auto& phi : bank.center_tests) {
        const cplx r =
            weak_residual_psi_single(state, state_next, params, dt, phi, gauge, forcing_psi);
        const CFaceField gphi = grad_center_to_face(phi);
        const double h1 = std::sqrt(sq(norm_l2(phi)) + sq(norm_l2(gphi)));
        if (h1 > 0.0) wr.r_psi = std::max(wr.r_psi, std::abs(r) / h1);
    }
    for (const auto& a : bank.face_tests) {
        const double r =
            weak_residual_A_single(state, state_next, params, dt, a, gauge, forcing_A);
        const double nm = std::sqrt(sq(norm_l2(a)) + sq(norm_l2(curl_face_to_edge_zero(a))) +
                                    sq(norm_l2(div_face_to_center(a))));
        if (nm > 0.0) wr.r_A = std::max(wr.r_A, std::abs(r) / nm);
    }
    return wr;
}

RunDelta stability_compare(const RunRecord& run1, const RunRecord& run2) {
    if (run1.snapshots.size() != run2.snapshots.size() || run1.snapshots.empty())
        throw std::invalid_argument("stability_compare: snapshot sequences do not match");
    // identical configs except initial data
    SimConfig c1 = run1.config, c2 = run2.config;
    c1.initial = c2.initial = InitialSpec{};
    if (!config_equal(c1, c2))
        throw std::invalid_argument("stability_compare: configs differ beyond initial data");

    const double eta = run1.config.physics.eta;
    RunDelta d;
    for (std::size_t n = 0; n < run1.snapshots.size(); ++n) {
        const Snapshot& s1 = run1.snapshots[n];
        const Snapshot& s2 = run2.snapshots[n];
        if (std::abs(s1.t - s2.t) > 1e-12)
            throw std::invalid_argument("stability_compare: snapshot times differ");
        CenterField e = s1.psi;
        axpy(-1.0, s2.psi, e);
        FaceField E = s1.A;
        axpy(-1.0, s2.A, E);
        const double en = norm_l2(e);
        const double En = norm_l2(E);
        d.times.push_back(s1.t);
        d.psi_delta_l2.push_back(en);
        d.a_delta_l2.push_back(En);
        d.v.push_back(0.5 * eta * en * en + 0.5 * En * En);
    }
    d.initial_v = d.v.front();
    d.terminal_delta = std::sqrt(sq(d.psi_delta_l2.back()) + sq(d.a_delta_l2.back()));
    // pointwise-in-time envelope constant
    double g = -1e300;
    bool any = false;
    if (d.initial_v > 0.0) {
        for (std::size_t n = 1; n < d.v.size(); ++n) {
            if (d.times[n] <= 0.0) continue;
            const double ratio = d.v[n] / d.initial_v;
            if (ratio <= 0.0) continue;
            g = std::max(g, std::log(ratio) / d.times[n]);
            any = true;
        }
    }
    d.g_fit = any ? g : 0.0;
    return d;
}

double norm_ratio(const FaceField& A) {
    const auto& dom = A.dom;
    const double nrm = norm_l2(A);
    if (nrm == 0.0) throw std::invalid_argument("norm_ratio: zero field");
    const Vec3d h = dom->spacing();
    const double vol = dom->cell_volume();

    // full H1 seminorm surrogate: componentwise centered gradients with
    // one-sided closure where a neighbor sample is missing; boundary faces
    // count as samples (their stored value is the exact normal trace, zero
    // for potentials)
    double num = 0.0;
    for (int comp = 0; comp < 3; ++comp) {
        const Vec3i fd = dom->face_dims(comp);
        for (std::size_t idx : dom->interior_faces(comp)) {
            int i, j, k;
            dom->decode_face(comp, idx, i, j, k);
            for (int d = 0; d < 3; ++d) {
                const int di = d == 0 ? 1 : 0, dj = d == 1 ? 1 : 0, dk = d == 2 ? 1 : 0;
                const bool has_m = i - di >= 0 && j - dj >= 0 && k - dk >= 0 &&
                                   dom->face_status(comp, dom->face_index(comp, i - di, j - dj,
                                                                          k - dk)) !=
                                       FaceStatus::Inactive;
                const bool has_p = i + di < fd.x && j + dj < fd.y && k + dk < fd.z &&
                                   dom->face_status(comp, dom->face_index(comp, i + di, j + dj,
                                                                          k + dk)) !=
                                       FaceStatus::Inactive;
                const double v0 = A.comp[comp][idx];
                double deriv = 0.0;
                if (has_m && has_p) {
                    deriv = (A.comp[comp][dom->face_index(comp, i + di, j + dj, k + dk)] -
                             A.comp[comp][dom->face_index(comp, i - di, j - dj, k - dk)]) /
                            (2.0 * h[d]);
                } else if (has_p) {
                    deriv = (A.comp[comp][dom->face_index(comp, i + di, j + dj, k + dk)] - v0) /
                            h[d];
                } else if (has_m) {
                    deriv = (v0 -
                             A.comp[comp][dom->face_index(comp, i - di, j - dj, k - dk)]) /
                            h[d];
                }
                num += vol * deriv * deriv;
            }
        }
    }

    const double den = sq(norm_l2(curl_face_to_edge_zero(A))) +
                       sq(norm_l2(div_face_to_center(A))) + sq(nrm);
    return num / den;
}

GaugeDistance gauge_compare(const RunRecord& lorentz, const RunRecord& zero_potential) {
    if (lorentz.snapshots.size() != zero_potential.snapshots.size() ||
        lorentz.snapshots.empty())
        throw std::invalid_argument("gauge_compare: snapshot sequences do not match");
    check_same_domain(lorentz.snapshots[0].psi, zero_potential.snapshots[0].psi);
    GaugeDistance g;
    const auto& dom = lorentz.snapshots[0].psi.dom;
    for (std::size_t n = 0; n < lorentz.snapshots.size(); ++n) {
        const Snapshot& sl = lorentz.snapshots[n];
        const Snapshot& sz = zero_potential.snapshots[n];
        if (std::abs(sl.t - sz.t) > 1e-12)
            throw std::invalid_argument("gauge_compare: snapshot times differ");
        ScalarField dmod = ScalarField::zeros(dom);
        for (std::size_t c : dom->inside_cells())
            dmod.v[c] = std::abs(sl.psi.v[c]) - std::abs(sz.psi.v[c]);
        EdgeField cl = curl_face_to_edge_zero(sl.A);
        const EdgeField cz = curl_face_to_edge_zero(sz.A);
        for (int d = 0; d < 3; ++d)
            for (std::size_t i = 0; i < cl.comp[d].size(); ++i) cl.comp[d][i] -= cz.comp[d][i];
        g.times.push_back(sl.t);
        g.psi_observable.push_back(norm_l2(dmod));
        g.curl_observable.push_back(norm_l2(cl));
    }
    return g;
}

}  // namespace tdgl
