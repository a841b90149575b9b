#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tdgl {

struct Vec3i {
    int x = 0, y = 0, z = 0;
    bool operator==(const Vec3i&) const = default;
    int operator[](int d) const { return d == 0 ? x : (d == 1 ? y : z); }
};

struct Vec3d {
    double x = 0, y = 0, z = 0;
    bool operator==(const Vec3d&) const = default;
    double operator[](int d) const { return d == 0 ? x : (d == 1 ? y : z); }
};

enum class FaceStatus : std::uint8_t { Inactive = 0, Interior = 1, Boundary = 2 };
enum class EdgeStatus : std::uint8_t { Inactive = 0, Interior = 1, Boundary = 2 };

// Axis pair spanning the removed quadrant of an L-shaped prism; the prism is
// extruded along the remaining axis.
enum class Quadrant { XY, YZ, ZX };

// Axis-aligned voxelization of a (possibly nonconvex) polyhedral domain.
// Cells are addressed in lexicographic x-fastest order. All classification
// (interior/boundary faces and edges) is precomputed at construction and the
// object is immutable afterwards, so it is safe to share across threads.
//
// Face grids (component d lives on faces normal to axis d):
//   x-faces (nx+1, ny, nz), y-faces (nx, ny+1, nz), z-faces (nx, ny, nz+1)
// Edge grids (component d lives on edges parallel to axis d):
//   x-edges (nx, ny+1, nz+1), y-edges (nx+1, ny, nz+1), z-edges (nx+1, ny+1, nz)
class VoxelDomain {
public:
    using Ptr = std::shared_ptr<const VoxelDomain>;

    static Ptr box(Vec3i counts, Vec3d lengths);
    static Ptr lshape(Vec3i counts, Vec3d lengths, Quadrant removed = Quadrant::XY);
    static Ptr fichera(Vec3i counts, Vec3d lengths);
    static Ptr from_mask(Vec3i counts, Vec3d lengths, std::vector<std::uint8_t> mask);

    const Vec3i& counts() const { return counts_; }
    const Vec3d& lengths() const { return lengths_; }
    const Vec3d& spacing() const { return spacing_; }
    int nx() const { return counts_.x; }
    int ny() const { return counts_.y; }
    int nz() const { return counts_.z; }

    std::size_t cell_count() const { return mask_.size(); }
    std::size_t inside_count() const { return inside_cells_.size(); }
    double cell_volume() const { return spacing_.x * spacing_.y * spacing_.z; }
    double volume() const { return cell_volume() * static_cast<double>(inside_count()); }

    std::size_t cell_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(counts_.x) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(counts_.y) * k);
    }
    bool inside(int i, int j, int k) const {
        if (i < 0 || j < 0 || k < 0 || i >= counts_.x || j >= counts_.y || k >= counts_.z)
            return false;
        return mask_[cell_index(i, j, k)] != 0;
    }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    Vec3i face_dims(int dir) const;
    std::size_t face_count(int dir) const;
    std::size_t face_index(int dir, int i, int j, int k) const;
    FaceStatus face_status(int dir, std::size_t idx) const { return fstat_[dir][idx]; }
    // +1 when the outward normal points along +axis(dir), -1 the other way,
    // 0 on non-boundary faces.
    int face_normal_sign(int dir, std::size_t idx) const { return fnormal_[dir][idx]; }

    Vec3i edge_dims(int dir) const;
    std::size_t edge_count(int dir) const;
    std::size_t edge_index(int dir, int i, int j, int k) const;
    EdgeStatus edge_status(int dir, std::size_t idx) const { return estat_[dir][idx]; }

    const std::vector<std::size_t>& inside_cells() const { return inside_cells_; }
    const std::vector<std::size_t>& interior_faces(int dir) const { return interior_faces_[dir]; }
    const std::vector<std::size_t>& boundary_faces(int dir) const { return boundary_faces_[dir]; }
    const std::vector<std::size_t>& interior_edges(int dir) const { return interior_edges_[dir]; }
    const std::vector<std::size_t>& boundary_edges(int dir) const { return boundary_edges_[dir]; }

    Vec3d cell_center(int i, int j, int k) const {
        return {(i + 0.5) * spacing_.x, (j + 0.5) * spacing_.y, (k + 0.5) * spacing_.z};
    }
    Vec3d face_center(int dir, int i, int j, int k) const;
    Vec3d edge_center(int dir, int i, int j, int k) const;

    void decode_face(int dir, std::size_t idx, int& i, int& j, int& k) const;
    void decode_edge(int dir, std::size_t idx, int& i, int& j, int& k) const;

    std::uint64_t content_hash() const;

    // JSON descriptor with run-length-encoded mask, for reproducibility.
    std::string to_json() const;
    static Ptr from_json(const std::string& text);

private:
    VoxelDomain() = default;
    static Ptr finalize(Vec3i counts, Vec3d lengths, std::vector<std::uint8_t> mask);
    void classify();
    void check_connected() const;

    Vec3i counts_;
    Vec3d lengths_;
    Vec3d spacing_;
    std::vector<std::uint8_t> mask_;
    std::array<std::vector<FaceStatus>, 3> fstat_;
    std::array<std::vector<std::int8_t>, 3> fnormal_;
    std::array<std::vector<EdgeStatus>, 3> estat_;
    std::vector<std::size_t> inside_cells_;
    std::array<std::vector<std::size_t>, 3> interior_faces_;
    std::array<std::vector<std::size_t>, 3> boundary_faces_;
    std::array<std::vector<std::size_t>, 3> interior_edges_;
    std::array<std::vector<std::size_t>, 3> boundary_edges_;
};

struct BoundaryFace {
    int dir;           // axis of the face normal
    std::size_t index; // linear index in the dir face grid
    int normal_sign;   // outward normal = normal_sign * e_dir
};

struct GridEdge {
    int dir;
    std::size_t index;
};

// Boundary faces with outward unit normals plus the re-entrant edges of the
// voxel mask (4-cell pattern: 3 inside, 1 outside).
struct BoundaryData {
    std::vector<BoundaryFace> boundary_faces;
    std::vector<GridEdge> reentrant_edges;
};

BoundaryData classify_boundary(const VoxelDomain& d);

}  // namespace tdgl
