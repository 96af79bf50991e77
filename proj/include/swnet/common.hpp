#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace swnet {

// Subsets of a ground set of at most 16 labels, stored as bitmasks.
using Subset = std::uint32_t;
// Subsets of the variables of a joint distribution (at most 64 variables).
using VarMask = std::uint64_t;
using Point = std::vector<double>;

inline constexpr int kMaxGround = 16;
inline constexpr std::size_t kMaxCells = std::size_t{1} << 24;
inline constexpr double kDefaultTol = 1e-9;

// Malformed or inconsistent user input.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A dense-table or ground-set cap was exceeded.
struct CapError : std::length_error {
    using std::length_error::length_error;
};

inline int popcount(Subset s) { return std::popcount(s); }
inline Subset full_set(int n) { return n >= 32 ? ~Subset{0} : (Subset{1} << n) - 1; }
inline bool contains_bit(Subset s, int i) { return (s >> i) & 1u; }
inline bool is_subset(Subset a, Subset b) { return (a & ~b) == 0; }

// Compress the bits of `s` selected by `mask` into the low bits (pext).
inline Subset extract_bits(Subset s, Subset mask) {
    Subset out = 0;
    int k = 0;
    for (Subset m = mask; m; m &= m - 1, ++k)
        if (s & (m & -m)) out |= Subset{1} << k;
    return out;
}

// Inverse of extract_bits (pdep).
inline Subset deposit_bits(Subset local, Subset mask) {
    Subset out = 0;
    int k = 0;
    for (Subset m = mask; m; m &= m - 1, ++k)
        if ((local >> k) & 1u) out |= m & -m;
    return out;
}

inline std::vector<int> members(Subset s) {
    std::vector<int> out;
    for (; s; s &= s - 1) out.push_back(std::countr_zero(s));
    return out;
}

// Seeded generator over std::mt19937_64 with the draws used by samplers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}
    double uniform();                      // [0,1)
    double uniform(double lo, double hi);
    int below(int n);                      // [0,n)
    double normal();
    std::vector<double> dirichlet(std::size_t n, double alpha = 1.0);
    std::vector<int> permutation(int n);
    // Independent child stream, e.g. one per trial.
    Rng fork(std::uint64_t stream) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace swnet
