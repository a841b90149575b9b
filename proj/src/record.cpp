#include "tdgl/record.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tdgl/errors.hpp"
#include "tdgl/ops.hpp"

namespace tdgl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSnapMagic = 0x50414e53'4c474454ull;

std::string snap_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06zu.bin", i);
    return buf;
}

void write_snapshot_bin(const std::string& path, const Snapshot& s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RecordError("cannot write snapshot: " + path);
    auto w = [&](const void* p, std::size_t n) { f.write(static_cast<const char*>(p), n); };
    w(&kSnapMagic, 8);
    w(&s.t, 8);
    w(&s.step, 8);
    const std::uint64_t ncells = s.psi.v.size();
    w(&ncells, 8);
    w(s.psi.v.data(), ncells * sizeof(cplx));
    for (int d = 0; d < 3; ++d) {
        const std::uint64_t nf = s.A.comp[d].size();
        w(&nf, 8);
        w(s.A.comp[d].data(), nf * 8);
    }
    if (!f) throw RecordError("snapshot write failed: " + path);
}

Snapshot read_snapshot_bin(const std::string& path, const VoxelDomain::Ptr& dom) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw RecordError("missing snapshot file: " + path);
    auto r = [&](void* p, std::size_t n) {
        f.read(static_cast<char*>(p), n);
        if (!f) throw RecordError("snapshot file truncated: " + path);
    };
    std::uint64_t magic = 0;
    r(&magic, 8);
    if (magic != kSnapMagic) throw RecordError("not a snapshot file: " + path);
    Snapshot s;
    r(&s.t, 8);
    r(&s.step, 8);
    std::uint64_t ncells = 0;
    r(&ncells, 8);
    s.psi = CenterField::zeros(dom);
    if (ncells != s.psi.v.size()) throw RecordError("snapshot cell count mismatch: " + path);
    r(s.psi.v.data(), ncells * sizeof(cplx));
    s.A = FaceField::zeros(dom);
    for (int d = 0; d < 3; ++d) {
        std::uint64_t nf = 0;
        r(&nf, 8);
        if (nf != s.A.comp[d].size()) throw RecordError("snapshot face count mismatch: " + path);
        r(s.A.comp[d].data(), nf * 8);
    }
    return s;
}

std::string series_csv(const std::vector<SeriesRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "t,e_kinetic,e_condensation,e_field,e_gauge,e_total,max_abs_psi,excess,"
          "psi_l2,a_l2,div_a_l2,psi_h1,lambda_m,dpsi_l2,da_l2,picard_iters,"
          "picard_converged,psi_solver_iters,a_solver_iters\n";
    for (const auto& r : rows) {
        os << r.t << ',' << r.e_kinetic << ',' << r.e_condensation << ',' << r.e_field << ','
           << r.e_gauge << ',' << r.e_total << ',' << r.max_abs_psi << ',' << r.excess << ','
           << r.psi_l2 << ',' << r.a_l2 << ',' << r.div_a_l2 << ',' << r.psi_h1 << ','
           << r.lambda_m << ',' << r.dpsi_l2 << ',' << r.da_l2 << ',' << r.picard_iters << ','
           << r.picard_converged << ',' << r.psi_solver_iters << ',' << r.a_solver_iters
           << '\n';
    }
    return os.str();
}

std::vector<SeriesRow> parse_series_csv(const std::string& text) {
    std::vector<SeriesRow> rows;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        SeriesRow r;
        std::istringstream ls(line);
        std::string tok;
        auto next_d = [&](double& out) {
            std::getline(ls, tok, ',');
            out = std::stod(tok);
        };
        auto next_i = [&](auto& out) {
            std::getline(ls, tok, ',');
            out = static_cast<std::decay_t<decltype(out)>>(std::stoll(tok));
        };
        next_d(r.t);
        next_d(r.e_kinetic);
        next_d(r.e_condensation);
        next_d(r.e_field);
        next_d(r.e_gauge);
        next_d(r.e_total);
        next_d(r.max_abs_psi);
        next_d(r.excess);
        next_d(r.psi_l2);
        next_d(r.a_l2);
        next_d(r.div_a_l2);
        next_d(r.psi_h1);
        next_d(r.lambda_m);
        next_d(r.dpsi_l2);
        next_d(r.da_l2);
        next_i(r.picard_iters);
        next_i(r.picard_converged);
        next_i(r.psi_solver_iters);
        next_i(r.a_solver_iters);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

std::uint64_t RunRecord::content_hash() const {
    Fnv64 h;
    h.update(serialize_config(config));
    h.update(series_csv(series));
    for (const auto& s : snapshots) {
        h.update_pod(s.t);
        h.update_pod(s.step);
        h.update_vec(s.psi.v);
        for (int d = 0; d < 3; ++d) h.update_vec(s.A.comp[d]);
    }
    h.update_pod(static_cast<int>(status));
    return h.digest();
}

void RunRecord::save(const std::string& dir) const {
    fs::create_directories(dir);
    {
        std::ofstream f(fs::path(dir) / "series.csv");
        if (!f) throw RecordError("cannot write series.csv in " + dir);
        f << series_csv(series);
    }
    json manifest;
    manifest["config"] = json::parse(serialize_config(config));
    manifest["status"] = status == RunStatus::Complete ? "complete" : "failed";
    manifest["failure"] = failure;
    manifest["content_hash"] = content_hash();
    manifest["config_hash"] = config.content_hash();
    manifest["picard_warnings"] = picard_warnings;
    manifest["extras"] = extras;
    manifest["series_file"] = "series.csv";
    std::vector<std::string> names;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        names.push_back(snap_name(i));
        write_snapshot_bin((fs::path(dir) / names.back()).string(), snapshots[i]);
        if (config.output.vtk)
            write_vtk_snapshot((fs::path(dir) / (names.back() + ".vtk")).string(), snapshots[i]);
    }
    manifest["snapshots"] = names;
    {
        std::ofstream f(fs::path(dir) / "manifest.json");
        if (!f) throw RecordError("cannot write manifest.json in " + dir);
        f << manifest.dump(2) << "\n";
    }
}

RunRecord RunRecord::load(const std::string& dir) {
    std::ifstream mf(fs::path(dir) / "manifest.json");
    if (!mf) throw RecordError("missing manifest.json in " + dir);
    json manifest;
    try {
        manifest = json::parse(mf);
    } catch (const json::exception& e) {
        throw RecordError(std::string("corrupt manifest.json: ") + e.what());
    }
    RunRecord rec;
    rec.config = parse_config_text(manifest.at("config").dump());
    rec.dom = rec.config.build_domain();
    rec.status = manifest.at("status").get<std::string>() == "complete" ? RunStatus::Complete
                                                                        : RunStatus::Failed;
    rec.failure = manifest.value("failure", "");
    rec.picard_warnings = manifest.value("picard_warnings", 0);
    if (manifest.contains("extras"))
        rec.extras = manifest["extras"].get<std::map<std::string, double>>();
    {
        std::ifstream sf(fs::path(dir) / "series.csv");
        if (!sf) throw RecordError("missing series.csv in " + dir);
        std::stringstream ss;
        ss << sf.rdbuf();
        rec.series = parse_series_csv(ss.str());
    }
    for (const auto& name : manifest.at("snapshots")) {
        rec.snapshots.push_back(
            read_snapshot_bin((fs::path(dir) / name.get<std::string>()).string(), rec.dom));
    }
    return rec;
}

void write_vtk_snapshot(const std::string& path, const Snapshot& snap) {
    const auto& dom = snap.psi.dom;
    std::ofstream f(path);
    if (!f) throw RecordError("cannot write VTK file: " + path);
    const int nx = dom->nx(), ny = dom->ny(), nz = dom->nz();
    const Vec3d h = dom->spacing();
    f << "# vtk DataFile Version 3.0\n";
    f << "tdgl snapshot t=" << snap.t << "\n";
    f << "ASCII\nDATASET STRUCTURED_POINTS\n";
    f << "DIMENSIONS " << nx + 1 << " " << ny + 1 << " " << nz + 1 << "\n";
    f << "ORIGIN 0 0 0\n";
    f << "SPACING " << h.x << " " << h.y << " " << h.z << "\n";
    f << "CELL_DATA " << static_cast<long>(nx) * ny * nz << "\n";

    f.precision(9);
    auto write_scalar = [&](const char* name, auto getter) {
        f << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) f << getter(i, j, k) << "\n";
    };
    write_scalar("psi_re", [&](int i, int j, int k) {
        return dom->inside(i, j, k) ? snap.psi.at(i, j, k).real() : 0.0;
    });
    write_scalar("psi_im", [&](int i, int j, int k) {
        return dom->inside(i, j, k) ? snap.psi.at(i, j, k).imag() : 0.0;
    });
    write_scalar("psi_abs", [&](int i, int j, int k) {
        return dom->inside(i, j, k) ? std::abs(snap.psi.at(i, j, k)) : 0.0;
    });
    write_scalar("mask", [&](int i, int j, int k) { return dom->inside(i, j, k) ? 1.0 : 0.0; });

    const auto ac = face_to_center_average(snap.A);
    f << "VECTORS A_center double\n";
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const std::size_t c = dom->cell_index(i, j, k);
                f << ac[0].v[c] << " " << ac[1].v[c] << " " << ac[2].v[c] << "\n";
            }
    if (!f) throw RecordError("VTK write failed: " + path);
}

}  // namespace tdgl
