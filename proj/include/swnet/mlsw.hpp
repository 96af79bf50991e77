#pragma once

#include <functional>
#include <string>
#include <vector>

#include "swnet/polytope.hpp"

namespace swnet {

// Sequence of disjoint nonempty blocks covering a ground subset.
struct OrderedPartition {
    std::vector<Subset> blocks;

    int size() const { return static_cast<int>(blocks.size()); }
    Subset ground() const;
    // Union of blocks strictly before block k (1-based); k may be K+1.
    Subset before(int k) const;
    // Block k (1-based), empty for k = 0 and k = K+1.
    Subset block(int k) const;
    bool operator==(const OrderedPartition&) const = default;
    std::string format(const GroundSet& g) const;
};

// Layerings may carry empty interior blocks (an idle decoding level) when
// allow_idle is set; leading and trailing empties are always rejected.
void validate_partition(const OrderedPartition& c, Subset ground, bool allow_idle = false);

// Enumerates ordered partitions of `ground`: by block count, then blocks in
// lexicographic order of their sorted members.
void for_each_ordered_partition(Subset ground, const std::function<void(const OrderedPartition&)>& visit);
std::vector<OrderedPartition> ordered_partitions(Subset ground);
std::uint64_t ordered_partition_count(int n);
bool lex_less(Subset a, Subset b);

// Two-component sources (X_v, Y_v) per ground label plus side information Z.
struct MlswContext {
    const JointDistribution* joint = nullptr;
    GroundSet ground;
    std::vector<VarMask> x, y;
    VarMask z = 0;

    MlswContext(const JointDistribution& dist, GroundSet g, std::vector<VarMask> xs, std::vector<VarMask> ys,
                VarMask side);
    VarMask x_of(Subset s) const;
    VarMask y_of(Subset s) const;
};

// h_{C,k}(S) = H(X_{S&L_k} Y_{S&L_{k-1}} | X_{L^k} Y_{L^{k-1}} Z), k = 1..K+1.
SetFunction layer_function(const MlswContext& ctx, const OrderedPartition& c, int k);
SetFunction partition_function(const MlswContext& ctx, const OrderedPartition& c);
// h(S) = H(X_S Y_S | Z)
SetFunction sw_function(const MlswContext& ctx);

bool region_contains(const MlswContext& ctx, const OrderedPartition& c, const Point& rate, double tol = kDefaultTol);
// Smallest R_S - h_C(S|S^c) over nonempty S, with the minimizing S.
std::pair<double, Subset> region_slack(const MlswContext& ctx, const OrderedPartition& c, const Point& rate);
bool sw_region_contains(const MlswContext& ctx, const Point& rate, double tol = kDefaultTol);

// True when t is a union of trailing blocks (including the whole ground).
bool is_suffix_union(const OrderedPartition& c, Subset t);
// L*_k = (T & L_{k-1}) | (T^c & L_k), k = 1..K+1. Leading and trailing empty
// blocks are dropped; interior empties stay as idle levels.
OrderedPartition conjugate_partition(const OrderedPartition& c, Subset t);

struct ConjugateCheck {
    std::size_t samples = 0, failures = 0;
    double max_identity_error = 0;  // over the two conditional-value identities
    bool pass(double tol = kDefaultTol) const { return failures == 0 && max_identity_error <= tol; }
};

// The facet of P_{h_C} for T equals the facet of P_{h_C*} for T^c.
ConjugateCheck check_conjugate_facets(const MlswContext& ctx, const OrderedPartition& c, Subset t, int n,
                                      std::uint64_t seed, double tol = kDefaultTol);

struct IdentityReport {
    CoveringReport covering;
    std::vector<OrderedPartition> partitions;
    std::size_t rate_points = 0, rate_points_uncovered = 0;
    // Per partition, how many rate points it was the first to contain.
    std::vector<std::size_t> rate_hits;
    bool pass() const { return covering.pass() && rate_points_uncovered == 0; }
};

// Union of the per-partition regions against the Slepian-Wolf region.
IdentityReport verify_sw_identity(const MlswContext& ctx, int n, std::uint64_t seed, double tol = kDefaultTol);

}  // namespace swnet
