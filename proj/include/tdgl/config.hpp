#pragma once

#include <cstdint>
#include <string>

#include "tdgl/domain.hpp"
#include "tdgl/util.hpp"

namespace tdgl {

enum class DomainKind { Box, LShape, Fichera, File };
enum class InitKind { Random, Constant, Meissner, Normal, Manufactured };
enum class RunMode { Grid, Galerkin, ZeroPotential };
enum class Scheme { Lagged, Picard };

struct DomainSpec {
    DomainKind kind = DomainKind::Box;
    Vec3i cells{8, 8, 8};
    Vec3d lengths{1.0, 1.0, 1.0};
    Quadrant removed_quadrant = Quadrant::XY;
    std::string path;  // JSON descriptor for kind == File
};

struct PhysicsSpec {
    double eta = 1.0;
    double kappa = 1.0;
    double t_final = 0.1;
    Vec3d applied_field{0.0, 0.0, 0.0};
};

struct TimeSpec {
    double dt = 1e-3;
    Scheme scheme = Scheme::Lagged;
    int picard_max = 1;
    double picard_tol = 1e-8;
};

struct InitialSpec {
    InitKind kind = InitKind::Random;
    std::uint64_t seed = 1;
    cplx psi_constant{1.0, 0.0};
    double perturb_delta = 0.0;
    std::uint64_t perturb_seed = 0;
};

struct OutputSpec {
    int every = 10;  // snapshot cadence in steps
    bool snapshots = true;
    bool vtk = false;
};

struct SolverSpec {
    double rel_tol = 1e-10;
    int max_iter = 20000;
};

struct GalerkinSpec {
    int n_modes = 16;
    std::string basis_file;  // optional precomputed basis
};

// Full description of one simulation; a config plus its seed determines the
// run bit-for-bit.
struct SimConfig {
    DomainSpec domain;
    PhysicsSpec physics;
    TimeSpec time;
    InitialSpec initial;
    OutputSpec output;
    RunMode mode = RunMode::Grid;
    GalerkinSpec galerkin;
    SolverSpec solver;

    VoxelDomain::Ptr build_domain() const;
    std::uint64_t content_hash() const;
};

// Strict parser: unknown keys are rejected and all violations are reported
// together in the thrown ConfigError.
SimConfig parse_config_text(const std::string& json_text);
SimConfig parse_config_file(const std::string& path);

// canonical JSON form; parse(serialize(c)) == c
std::string serialize_config(const SimConfig& c);

bool config_equal(const SimConfig& a, const SimConfig& b);

}  // namespace tdgl
