#include "tdgl/domain.hpp"

#include <queue>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tdgl/util.hpp"

namespace tdgl {

Vec3i VoxelDomain::face_dims(int dir) const {
    switch (dir) {
        case 0: return {counts_.x + 1, counts_.y, counts_.z};
        case 1: return {counts_.x, counts_.y + 1, counts_.z};
        default: return {counts_.x, counts_.y, counts_.z + 1};
    }
}

Vec3i VoxelDomain::edge_dims(int dir) const {
    switch (dir) {
        case 0: return {counts_.x, counts_.y + 1, counts_.z + 1};
        case 1: return {counts_.x + 1, counts_.y, counts_.z + 1};
        default: return {counts_.x + 1, counts_.y + 1, counts_.z};
    }
}

std::size_t VoxelDomain::face_count(int dir) const {
    const Vec3i d = face_dims(dir);
    return static_cast<std::size_t>(d.x) * d.y * d.z;
}

std::size_t VoxelDomain::edge_count(int dir) const {
    const Vec3i d = edge_dims(dir);
    return static_cast<std::size_t>(d.x) * d.y * d.z;
}

std::size_t VoxelDomain::face_index(int dir, int i, int j, int k) const {
    const Vec3i d = face_dims(dir);
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(d.x) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(d.y) * k);
}

std::size_t VoxelDomain::edge_index(int dir, int i, int j, int k) const {
    const Vec3i d = edge_dims(dir);
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(d.x) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(d.y) * k);
}

void VoxelDomain::decode_face(int dir, std::size_t idx, int& i, int& j, int& k) const {
    const Vec3i d = face_dims(dir);
    i = static_cast<int>(idx % d.x);
    j = static_cast<int>((idx / d.x) % d.y);
    k = static_cast<int>(idx / (static_cast<std::size_t>(d.x) * d.y));
}

void VoxelDomain::decode_edge(int dir, std::size_t idx, int& i, int& j, int& k) const {
    const Vec3i d = edge_dims(dir);
    i = static_cast<int>(idx % d.x);
    j = static_cast<int>((idx / d.x) % d.y);
    k = static_cast<int>(idx / (static_cast<std::size_t>(d.x) * d.y));
}

Vec3d VoxelDomain::face_center(int dir, int i, int j, int k) const {
    switch (dir) {
        case 0: return {i * spacing_.x, (j + 0.5) * spacing_.y, (k + 0.5) * spacing_.z};
        case 1: return {(i + 0.5) * spacing_.x, j * spacing_.y, (k + 0.5) * spacing_.z};
        default: return {(i + 0.5) * spacing_.x, (j + 0.5) * spacing_.y, k * spacing_.z};
    }
}

Vec3d VoxelDomain::edge_center(int dir, int i, int j, int k) const {
    switch (dir) {
        case 0: return {(i + 0.5) * spacing_.x, j * spacing_.y, k * spacing_.z};
        case 1: return {i * spacing_.x, (j + 0.5) * spacing_.y, k * spacing_.z};
        default: return {i * spacing_.x, j * spacing_.y, (k + 0.5) * spacing_.z};
    }
}

namespace {

void validate_counts_lengths(const Vec3i& counts, const Vec3d& lengths) {
    if (counts.x < 2 || counts.y < 2 || counts.z < 2)
        throw std::invalid_argument("cell counts must be >= 2 in every direction");
    if (!(lengths.x > 0.0) || !(lengths.y > 0.0) || !(lengths.z > 0.0))
        throw std::invalid_argument("domain lengths must be positive");
}

}  // namespace

VoxelDomain::Ptr VoxelDomain::finalize(Vec3i counts, Vec3d lengths, std::vector<std::uint8_t> mask) {
    auto d = std::shared_ptr<VoxelDomain>(new VoxelDomain());
    d->counts_ = counts;
    d->lengths_ = lengths;
    d->spacing_ = {lengths.x / counts.x, lengths.y / counts.y, lengths.z / counts.z};
    d->mask_ = std::move(mask);
    if (d->mask_.size() != static_cast<std::size_t>(counts.x) * counts.y * counts.z)
        throw std::invalid_argument("mask size does not match cell counts");
    d->classify();
    if (d->inside_cells_.empty())
        throw std::invalid_argument("mask has no inside cells");
    d->check_connected();
    return d;
}

VoxelDomain::Ptr VoxelDomain::box(Vec3i counts, Vec3d lengths) {
    validate_counts_lengths(counts, lengths);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(counts.x) * counts.y * counts.z, 1);
    return finalize(counts, lengths, std::move(mask));
}

VoxelDomain::Ptr VoxelDomain::lshape(Vec3i counts, Vec3d lengths, Quadrant removed) {
    validate_counts_lengths(counts, lengths);
    int a = 0, b = 1;  // axes spanning the removed quadrant
    switch (removed) {
        case Quadrant::XY: a = 0; b = 1; break;
        case Quadrant::YZ: a = 1; b = 2; break;
        case Quadrant::ZX: a = 2; b = 0; break;
    }
    if (counts[a] % 2 != 0 || counts[b] % 2 != 0)
        throw std::invalid_argument("L-shape requires even cell counts on the removed-quadrant axes");
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(counts.x) * counts.y * counts.z, 1);
    const int ha = counts[a] / 2, hb = counts[b] / 2;
    for (int k = 0; k < counts.z; ++k)
        for (int j = 0; j < counts.y; ++j)
            for (int i = 0; i < counts.x; ++i) {
                const int c[3] = {i, j, k};
                if (c[a] >= ha && c[b] >= hb)
                    mask[static_cast<std::size_t>(i) +
                         static_cast<std::size_t>(counts.x) * (j + static_cast<std::size_t>(counts.y) * k)] = 0;
            }
    return finalize(counts, lengths, std::move(mask));
}

VoxelDomain::Ptr VoxelDomain::fichera(Vec3i counts, Vec3d lengths) {
    validate_counts_lengths(counts, lengths);
    if (counts.x % 2 != 0 || counts.y % 2 != 0 || counts.z % 2 != 0)
        throw std::invalid_argument("Fichera corner requires even cell counts");
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(counts.x) * counts.y * counts.z, 1);
    for (int k = counts.z / 2; k < counts.z; ++k)
        for (int j = counts.y / 2; j < counts.y; ++j)
            for (int i = counts.x / 2; i < counts.x; ++i)
                mask[static_cast<std::size_t>(i) +
                     static_cast<std::size_t>(counts.x) * (j + static_cast<std::size_t>(counts.y) * k)] = 0;
    return finalize(counts, lengths, std::move(mask));
}

VoxelDomain::Ptr VoxelDomain::from_mask(Vec3i counts, Vec3d lengths, std::vector<std::uint8_t> mask) {
    validate_counts_lengths(counts, lengths);
    return finalize(counts, lengths, std::move(mask));
}

void VoxelDomain::classify() {
    for (int k = 0; k < counts_.z; ++k)
        for (int j = 0; j < counts_.y; ++j)
            for (int i = 0; i < counts_.x; ++i)
                if (mask_[cell_index(i, j, k)]) inside_cells_.push_back(cell_index(i, j, k));

    for (int dir = 0; dir < 3; ++dir) {
        const Vec3i fd = face_dims(dir);
        fstat_[dir].assign(face_count(dir), FaceStatus::Inactive);
        fnormal_[dir].assign(face_count(dir), 0);
        for (int k = 0; k < fd.z; ++k)
            for (int j = 0; j < fd.y; ++j)
                for (int i = 0; i < fd.x; ++i) {
                    // cells on the negative/positive side of the face
                    int li = i, lj = j, lk = k;
                    if (dir == 0) li = i - 1;
                    if (dir == 1) lj = j - 1;
                    if (dir == 2) lk = k - 1;
                    const bool neg = inside(li, lj, lk);
                    int ri = i, rj = j, rk = k;
                    const bool pos = inside(ri, rj, rk);
                    const std::size_t idx = face_index(dir, i, j, k);
                    if (neg && pos) {
                        fstat_[dir][idx] = FaceStatus::Interior;
                        interior_faces_[dir].push_back(idx);
                    } else if (neg != pos) {
                        fstat_[dir][idx] = FaceStatus::Boundary;
                        fnormal_[dir][idx] = neg ? +1 : -1;
                        boundary_faces_[dir].push_back(idx);
                    }
                }
    }

    for (int dir = 0; dir < 3; ++dir) {
        const Vec3i ed = edge_dims(dir);
        estat_[dir].assign(edge_count(dir), EdgeStatus::Inactive);
        for (int k = 0; k < ed.z; ++k)
            for (int j = 0; j < ed.y; ++j)
                for (int i = 0; i < ed.x; ++i) {
                    int cnt = 0;
                    // the 4 cells sharing the edge
                    for (int a = -1; a <= 0; ++a)
                        for (int b = -1; b <= 0; ++b) {
                            bool in = false;
                            if (dir == 0) in = inside(i, j + a, k + b);
                            else if (dir == 1) in = inside(i + a, j, k + b);
                            else in = inside(i + a, j + b, k);
                            cnt += in ? 1 : 0;
                        }
                    const std::size_t idx = edge_index(dir, i, j, k);
                    if (cnt == 4) {
                        estat_[dir][idx] = EdgeStatus::Interior;
                        interior_edges_[dir].push_back(idx);
                    } else if (cnt >= 1) {
                        estat_[dir][idx] = EdgeStatus::Boundary;
                        boundary_edges_[dir].push_back(idx);
                    }
                }
    }
}

void VoxelDomain::check_connected() const {
    std::vector<std::uint8_t> seen(mask_.size(), 0);
    std::queue<std::size_t> q;
    q.push(inside_cells_.front());
    seen[inside_cells_.front()] = 1;
    std::size_t visited = 1;
    while (!q.empty()) {
        const std::size_t c = q.front();
        q.pop();
        const int i = static_cast<int>(c % counts_.x);
        const int j = static_cast<int>((c / counts_.x) % counts_.y);
        const int k = static_cast<int>(c / (static_cast<std::size_t>(counts_.x) * counts_.y));
        const int di[6] = {1, -1, 0, 0, 0, 0};
        const int dj[6] = {0, 0, 1, -1, 0, 0};
        const int dk[6] = {0, 0, 0, 0, 1, -1};
        for (int s = 0; s < 6; ++s) {
            const int ni = i + di[s], nj = j + dj[s], nk = k + dk[s];
            if (!inside(ni, nj, nk)) continue;
            const std::size_t n = cell_index(ni, nj, nk);
            if (!seen[n]) {
                seen[n] = 1;
                ++visited;
                q.push(n);
            }
        }
    }
    if (visited != inside_cells_.size())
        throw std::invalid_argument("mask is not face-connected (multiple components)");
}

std::uint64_t VoxelDomain::content_hash() const {
    Fnv64 h;
    h.update_pod(counts_.x);
    h.update_pod(counts_.y);
    h.update_pod(counts_.z);
    h.update_pod(lengths_.x);
    h.update_pod(lengths_.y);
    h.update_pod(lengths_.z);
    h.update_vec(mask_);
    return h.digest();
}

std::string VoxelDomain::to_json() const {
    nlohmann::json j;
    j["cells"] = {counts_.x, counts_.y, counts_.z};
    j["lengths"] = {lengths_.x, lengths_.y, lengths_.z};
    // run-length encoding of the mask in lexicographic order: value of the
    // first run, then run lengths
    std::vector<std::size_t> runs;
    std::uint8_t cur = mask_.empty() ? 0 : mask_[0];
    const std::uint8_t first = cur;
    std::size_t len = 0;
    for (std::uint8_t m : mask_) {
        if (m == cur) {
            ++len;
        } else {
            runs.push_back(len);
            cur = m;
            len = 1;
        }
    }
    runs.push_back(len);
    j["mask_first"] = static_cast<int>(first);
    j["mask_runs"] = runs;
    return j.dump(2);
}

VoxelDomain::Ptr VoxelDomain::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Vec3i counts{j.at("cells").at(0).get<int>(), j.at("cells").at(1).get<int>(),
                 j.at("cells").at(2).get<int>()};
    Vec3d lengths{j.at("lengths").at(0).get<double>(), j.at("lengths").at(1).get<double>(),
                  j.at("lengths").at(2).get<double>()};
    std::vector<std::uint8_t> mask;
    mask.reserve(static_cast<std::size_t>(counts.x) * counts.y * counts.z);
    std::uint8_t cur = static_cast<std::uint8_t>(j.at("mask_first").get<int>());
    for (const auto& r : j.at("mask_runs")) {
        const std::size_t len = r.get<std::size_t>();
        mask.insert(mask.end(), len, cur);
        cur = cur ? 0 : 1;
    }
    return from_mask(counts, lengths, std::move(mask));
}

BoundaryData classify_boundary(const VoxelDomain& d) {
    BoundaryData out;
    for (int dir = 0; dir < 3; ++dir)
        for (std::size_t idx : d.boundary_faces(dir))
            out.boundary_faces.push_back({dir, idx, d.face_normal_sign(dir, idx)});

    // re-entrant edges: exactly 3 of the 4 surrounding cells inside
    for (int dir = 0; dir < 3; ++dir) {
        const Vec3i ed = d.edge_dims(dir);
        for (int k = 0; k < ed.z; ++k)
            for (int j = 0; j < ed.y; ++j)
                for (int i = 0; i < ed.x; ++i) {
                    int cnt = 0;
                    for (int a = -1; a <= 0; ++a)
                        for (int b = -1; b <= 0; ++b) {
                            bool in = false;
                            if (dir == 0) in = d.inside(i, j + a, k + b);
                            else if (dir == 1) in = d.inside(i + a, j, k + b);
                            else in = d.inside(i + a, j + b, k);
                            cnt += in ? 1 : 0;
                        }
                    if (cnt == 3) out.reentrant_edges.push_back({dir, d.edge_index(dir, i, j, k)});
                }
    }
    return out;
}

}  // namespace tdgl
