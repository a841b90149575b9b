#include "tdgl/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tdgl/errors.hpp"

namespace tdgl {

using nlohmann::json;

VoxelDomain::Ptr SimConfig::build_domain() const {
    switch (domain.kind) {
        case DomainKind::Box: return VoxelDomain::box(domain.cells, domain.lengths);
        case DomainKind::LShape:
            return VoxelDomain::lshape(domain.cells, domain.lengths, domain.removed_quadrant);
        case DomainKind::Fichera: return VoxelDomain::fichera(domain.cells, domain.lengths);
        case DomainKind::File: {
            std::ifstream f(domain.path);
            if (!f) throw RecordError("cannot open domain descriptor: " + domain.path);
            std::stringstream ss;
            ss << f.rdbuf();
            return VoxelDomain::from_json(ss.str());
        }
    }
    throw std::logic_error("unreachable");
}

std::uint64_t SimConfig::content_hash() const {
    Fnv64 h;
    h.update(serialize_config(*this));
    return h.digest();
}

namespace {

const char* domain_kind_name(DomainKind k) {
    switch (k) {
        case DomainKind::Box: return "box";
        case DomainKind::LShape: return "lshape";
        case DomainKind::Fichera: return "fichera";
        case DomainKind::File: return "file";
    }
    return "?";
}

const char* init_kind_name(InitKind k) {
    switch (k) {
        case InitKind::Random: return "random";
        case InitKind::Constant: return "constant";
        case InitKind::Meissner: return "meissner";
        case InitKind::Normal: return "normal";
        case InitKind::Manufactured: return "manufactured";
    }
    return "?";
}

const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::Grid: return "grid";
        case RunMode::Galerkin: return "galerkin";
        case RunMode::ZeroPotential: return "zero_potential";
    }
    return "?";
}

const char* scheme_name(Scheme s) { return s == Scheme::Lagged ? "lagged" : "picard"; }

const char* quadrant_name(Quadrant q) {
    switch (q) {
        case Quadrant::XY: return "xy";
        case Quadrant::YZ: return "yz";
        case Quadrant::ZX: return "zx";
    }
    return "?";
}

// Collects violations instead of failing fast so the error names every
// problem at once.
struct Checker {
    std::vector<std::string> errors;

    void fail(const std::string& msg) { errors.push_back(msg); }

    void reject_unknown(const json& obj, const char* scope,
                        std::initializer_list<const char*> allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = false;
            for (const char* a : allowed)
                if (it.key() == a) {
                    ok = true;
                    break;
                }
            if (!ok) fail(std::string(scope) + ": unknown key \"" + it.key() + "\"");
        }
    }

    template <typename T>
    bool get(const json& obj, const char* scope, const char* key, T& out) {
        if (!obj.contains(key)) return false;
        try {
            out = obj.at(key).get<T>();
            return true;
        } catch (const json::exception& e) {
            fail(std::string(scope) + "." + key + ": " + e.what());
            return false;
        }
    }

    bool get_vec3i(const json& obj, const char* scope, const char* key, Vec3i& out) {
        std::vector<int> v;
        if (!get(obj, scope, key, v)) return false;
        if (v.size() != 3) {
            fail(std::string(scope) + "." + key + ": expected 3 integers");
            return false;
        }
        out = {v[0], v[1], v[2]};
        return true;
    }

    bool get_vec3d(const json& obj, const char* scope, const char* key, Vec3d& out) {
        std::vector<double> v;
        if (!get(obj, scope, key, v)) return false;
        if (v.size() != 3) {
            fail(std::string(scope) + "." + key + ": expected 3 numbers");
            return false;
        }
        out = {v[0], v[1], v[2]};
        return true;
    }
};

}  // namespace

SimConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError({std::string("invalid JSON: ") + e.what()});
    }
    if (!j.is_object()) throw ConfigError({"config root must be a JSON object"});

    SimConfig c;
    Checker ck;
    ck.reject_unknown(j, "config",
                      {"domain", "physics", "time", "initial", "output", "mode", "galerkin",
                       "solver"});

    if (j.contains("domain")) {
        const json& d = j["domain"];
        ck.reject_unknown(d, "domain", {"kind", "cells", "lengths", "removed_quadrant", "path"});
        std::string kind;
        if (ck.get(d, "domain", "kind", kind)) {
            if (kind == "box") c.domain.kind = DomainKind::Box;
            else if (kind == "lshape") c.domain.kind = DomainKind::LShape;
            else if (kind == "fichera") c.domain.kind = DomainKind::Fichera;
            else if (kind == "file") c.domain.kind = DomainKind::File;
            else ck.fail("domain.kind: must be box|lshape|fichera|file, got \"" + kind + "\"");
        }
        ck.get_vec3i(d, "domain", "cells", c.domain.cells);
        ck.get_vec3d(d, "domain", "lengths", c.domain.lengths);
        std::string quad;
        if (ck.get(d, "domain", "removed_quadrant", quad)) {
            if (quad == "xy") c.domain.removed_quadrant = Quadrant::XY;
            else if (quad == "yz") c.domain.removed_quadrant = Quadrant::YZ;
            else if (quad == "zx") c.domain.removed_quadrant = Quadrant::ZX;
            else ck.fail("domain.removed_quadrant: must be xy|yz|zx");
        }
        ck.get(d, "domain", "path", c.domain.path);
    }

    if (j.contains("physics")) {
        const json& p = j["physics"];
        ck.reject_unknown(p, "physics", {"eta", "kappa", "t_final", "applied_field"});
        ck.get(p, "physics", "eta", c.physics.eta);
        ck.get(p, "physics", "kappa", c.physics.kappa);
        ck.get(p, "physics", "t_final", c.physics.t_final);
        ck.get_vec3d(p, "physics", "applied_field", c.physics.applied_field);
    }

    if (j.contains("time")) {
        const json& t = j["time"];
        ck.reject_unknown(t, "time", {"dt", "scheme", "picard_max", "picard_tol"});
        ck.get(t, "time", "dt", c.time.dt);
        std::string scheme;
        if (ck.get(t, "time", "scheme", scheme)) {
            if (scheme == "lagged") c.time.scheme = Scheme::Lagged;
            else if (scheme == "picard") c.time.scheme = Scheme::Picard;
            else ck.fail("time.scheme: must be lagged|picard");
        }
        ck.get(t, "time", "picard_max", c.time.picard_max);
        ck.get(t, "time", "picard_tol", c.time.picard_tol);
    }

    if (j.contains("initial")) {
        const json& n = j["initial"];
        ck.reject_unknown(n, "initial",
                          {"kind", "seed", "psi_constant", "perturb_delta", "perturb_seed"});
        std::string kind;
        if (ck.get(n, "initial", "kind", kind)) {
            if (kind == "random") c.initial.kind = InitKind::Random;
            else if (kind == "constant") c.initial.kind = InitKind::Constant;
            else if (kind == "meissner") c.initial.kind = InitKind::Meissner;
            else if (kind == "normal") c.initial.kind = InitKind::Normal;
            else if (kind == "manufactured") c.initial.kind = InitKind::Manufactured;
            else
                ck.fail("initial.kind: must be random|constant|meissner|normal|manufactured, "
                        "got \"" + kind + "\"");
        }
        ck.get(n, "initial", "seed", c.initial.seed);
        std::vector<double> pc;
        if (ck.get(n, "initial", "psi_constant", pc)) {
            if (pc.size() != 2) ck.fail("initial.psi_constant: expected [re, im]");
            else c.initial.psi_constant = cplx(pc[0], pc[1]);
        }
        ck.get(n, "initial", "perturb_delta", c.initial.perturb_delta);
        ck.get(n, "initial", "perturb_seed", c.initial.perturb_seed);
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        ck.reject_unknown(o, "output", {"every", "snapshots", "vtk"});
        ck.get(o, "output", "every", c.output.every);
        ck.get(o, "output", "snapshots", c.output.snapshots);
        ck.get(o, "output", "vtk", c.output.vtk);
    }

    if (j.contains("mode")) {
        std::string mode;
        if (ck.get(j, "config", "mode", mode)) {
            if (mode == "grid") c.mode = RunMode::Grid;
            else if (mode == "galerkin") c.mode = RunMode::Galerkin;
            else if (mode == "zero_potential") c.mode = RunMode::ZeroPotential;
            else ck.fail("mode: must be grid|galerkin|zero_potential, got \"" + mode + "\"");
        }
    }

    if (j.contains("galerkin")) {
        const json& g = j["galerkin"];
        ck.reject_unknown(g, "galerkin", {"n_modes", "basis_file"});
        ck.get(g, "galerkin", "n_modes", c.galerkin.n_modes);
        ck.get(g, "galerkin", "basis_file", c.galerkin.basis_file);
    }

    if (j.contains("solver")) {
        const json& s = j["solver"];
        ck.reject_unknown(s, "solver", {"rel_tol", "max_iter"});
        ck.get(s, "solver", "rel_tol", c.solver.rel_tol);
        ck.get(s, "solver", "max_iter", c.solver.max_iter);
    }

    // invariant checks (performed even if some keys failed, to report
    // everything at once)
    if (!(c.physics.eta > 0.0)) ck.fail("physics.eta: must be > 0");
    if (!(c.physics.kappa > 0.0)) ck.fail("physics.kappa: must be > 0");
    if (!(c.physics.t_final > 0.0)) ck.fail("physics.t_final: must be > 0");
    if (!(c.time.dt > 0.0)) ck.fail("time.dt: must be > 0");
    if (c.time.dt > 0.0 && c.physics.t_final > 0.0 && c.physics.t_final + 1e-12 < c.time.dt)
        ck.fail("time.dt: must not exceed physics.t_final");
    if (c.time.picard_max < 1) ck.fail("time.picard_max: must be >= 1");
    if (!(c.time.picard_tol > 0.0)) ck.fail("time.picard_tol: must be > 0");
    if (c.domain.cells.x < 2 || c.domain.cells.y < 2 || c.domain.cells.z < 2)
        ck.fail("domain.cells: all counts must be >= 2");
    if (!(c.domain.lengths.x > 0) || !(c.domain.lengths.y > 0) || !(c.domain.lengths.z > 0))
        ck.fail("domain.lengths: all lengths must be > 0");
    if (c.domain.kind == DomainKind::LShape) {
        int a = 0, b = 1;
        if (c.domain.removed_quadrant == Quadrant::YZ) { a = 1; b = 2; }
        if (c.domain.removed_quadrant == Quadrant::ZX) { a = 2; b = 0; }
        if (c.domain.cells[a] % 2 != 0 || c.domain.cells[b] % 2 != 0)
            ck.fail("domain.cells: lshape requires even counts on the removed-quadrant axes");
    }
    if (c.domain.kind == DomainKind::Fichera &&
        (c.domain.cells.x % 2 || c.domain.cells.y % 2 || c.domain.cells.z % 2))
        ck.fail("domain.cells: fichera requires even counts");
    if (c.domain.kind == DomainKind::File && c.domain.path.empty())
        ck.fail("domain.path: required for kind \"file\"");
    if (c.output.every < 1) ck.fail("output.every: must be >= 1");
    if (c.initial.kind == InitKind::Constant && std::abs(c.initial.psi_constant) > 1.0 + 1e-12)
        ck.fail("initial.psi_constant: |psi| must be <= 1");
    if (c.initial.perturb_delta < 0.0) ck.fail("initial.perturb_delta: must be >= 0");
    if (c.initial.kind == InitKind::Manufactured) {
        if (c.domain.kind != DomainKind::Box ||
            c.domain.lengths.x != 1.0 || c.domain.lengths.y != 1.0 || c.domain.lengths.z != 1.0)
            ck.fail("initial.kind manufactured: requires the unit box domain");
        if (c.mode == RunMode::ZeroPotential)
            ck.fail("initial.kind manufactured: not available for zero_potential mode");
        if (c.physics.applied_field.x != 0 || c.physics.applied_field.y != 0 ||
            c.physics.applied_field.z != 0)
            ck.fail("initial.kind manufactured: requires applied_field = 0");
    }
    if (c.mode == RunMode::Galerkin && c.galerkin.n_modes < 1)
        ck.fail("galerkin.n_modes: must be >= 1");
    if (!(c.solver.rel_tol > 0.0)) ck.fail("solver.rel_tol: must be > 0");
    if (c.solver.max_iter < 1) ck.fail("solver.max_iter: must be >= 1");

    if (!ck.errors.empty()) throw ConfigError(std::move(ck.errors));
    return c;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError({"cannot open config file: " + path});
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const SimConfig& c) {
    json j;
    j["domain"]["kind"] = domain_kind_name(c.domain.kind);
    j["domain"]["cells"] = {c.domain.cells.x, c.domain.cells.y, c.domain.cells.z};
    j["domain"]["lengths"] = {c.domain.lengths.x, c.domain.lengths.y, c.domain.lengths.z};
    if (c.domain.kind == DomainKind::LShape)
        j["domain"]["removed_quadrant"] = quadrant_name(c.domain.removed_quadrant);
    if (c.domain.kind == DomainKind::File) j["domain"]["path"] = c.domain.path;
    j["physics"]["eta"] = c.physics.eta;
    j["physics"]["kappa"] = c.physics.kappa;
    j["physics"]["t_final"] = c.physics.t_final;
    j["physics"]["applied_field"] = {c.physics.applied_field.x, c.physics.applied_field.y,
                                     c.physics.applied_field.z};
    j["time"]["dt"] = c.time.dt;
    j["time"]["scheme"] = scheme_name(c.time.scheme);
    j["time"]["picard_max"] = c.time.picard_max;
    j["time"]["picard_tol"] = c.time.picard_tol;
    j["initial"]["kind"] = init_kind_name(c.initial.kind);
    j["initial"]["seed"] = c.initial.seed;
    j["initial"]["psi_constant"] = {c.initial.psi_constant.real(), c.initial.psi_constant.imag()};
    j["initial"]["perturb_delta"] = c.initial.perturb_delta;
    j["initial"]["perturb_seed"] = c.initial.perturb_seed;
    j["output"]["every"] = c.output.every;
    j["output"]["snapshots"] = c.output.snapshots;
    j["output"]["vtk"] = c.output.vtk;
    j["mode"] = mode_name(c.mode);
    j["galerkin"]["n_modes"] = c.galerkin.n_modes;
    j["galerkin"]["basis_file"] = c.galerkin.basis_file;
    j["solver"]["rel_tol"] = c.solver.rel_tol;
    j["solver"]["max_iter"] = c.solver.max_iter;
    return j.dump(2);
}

bool config_equal(const SimConfig& a, const SimConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

}  // namespace tdgl
