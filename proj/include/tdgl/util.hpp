#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace tdgl {

using cplx = std::complex<double>;

// Deterministic 64-bit generator (splitmix64 seeded xoshiro-free variant).
// Kept local so runs reproduce bit-for-bit regardless of the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    cplx unit_disk() {
        // modulus uniform in [0,1), phase uniform; |z| < 1 always
        const double r = uniform01();
        const double th = uniform(0.0, 6.283185307179586476925286766559);
        return {r * std::cos(th), r * std::sin(th)};
    }

private:
    std::uint64_t state_;
};

// Fixed-shape pairwise (tree) reduction; deterministic and accurate.
template <typename T>
T pairwise_sum(const T* data, std::size_t n) {
    if (n <= 16) {
        T s{};
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(v.data(), v.size());
}

// FNV-1a 64-bit content hash, used for config/domain/output fingerprints.
class Fnv64 {
public:
    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 0x100000001b3ull;
        }
    }
    void update(std::string_view s) { update(s.data(), s.size()); }
    template <typename T>
    void update_pod(const T& x) { update(&x, sizeof(T)); }
    template <typename T>
    void update_vec(const std::vector<T>& v) { update(v.data(), v.size() * sizeof(T)); }
    std::uint64_t digest() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

inline double sq(double x) { return x * x; }

}  // namespace tdgl
