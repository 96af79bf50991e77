#include "swnet/mlsw.hpp"

#include <algorithm>
#include <cmath>

#include "swnet/kernels.hpp"

namespace swnet {

Subset OrderedPartition::ground() const {
    Subset g = 0;
    for (Subset b : blocks) g |= b;
    return g;
}

Subset OrderedPartition::before(int k) const {
    Subset u = 0;
    for (int j = 1; j < k && j <= size(); ++j) u |= blocks[j - 1];
    return u;
}

Subset OrderedPartition::block(int k) const { return (k >= 1 && k <= size()) ? blocks[k - 1] : 0; }

std::string OrderedPartition::format(const GroundSet& g) const {
    std::string s = "[";
    for (std::size_t i = 0; i < blocks.size(); ++i) s += (i ? "," : "") + g.format(blocks[i]);
    return s + "]";
}

void validate_partition(const OrderedPartition& c, Subset ground, bool allow_idle) {
    Subset seen = 0;
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        const Subset b = c.blocks[i];
        const bool edge = i == 0 || i + 1 == c.blocks.size();
        if (b == 0 && (edge || !allow_idle)) throw InputError("ordered partition has an empty block");
        if (seen & b) throw InputError("ordered partition blocks overlap");
        seen |= b;
    }
    if (seen != ground) throw InputError("ordered partition does not cover the ground set");
}

bool lex_less(Subset a, Subset b) {
    while (a && b) {
        Subset la = a & -a, lb = b & -b;
        if (la != lb) return la < lb;
        a ^= la;
        b ^= lb;
    }
    return a == 0 && b != 0;
}

namespace {

void extend(Subset remaining, int blocks_left, const std::vector<Subset>& order, OrderedPartition& cur,
            const std::function<void(const OrderedPartition&)>& visit) {
    if (blocks_left == 0) {
        if (remaining == 0) visit(cur);
        return;
    }
    for (Subset cand : order) {
        if (!is_subset(cand, remaining)) continue;
        const Subset rest = remaining & ~cand;
        if (blocks_left == 1 ? rest != 0 : popcount(rest) < blocks_left - 1) continue;
        cur.blocks.push_back(cand);
        extend(rest, blocks_left - 1, order, cur, visit);
        cur.blocks.pop_back();
    }
}

}  // namespace

void for_each_ordered_partition(Subset ground, const std::function<void(const OrderedPartition&)>& visit) {
    if (popcount(ground) > 8) throw CapError("ordered partitions are enumerated for at most 8 labels");
    if (ground == 0) return;
    std::vector<Subset> order;
    for (Subset s = ground;; s = (s - 1) & ground) {
        if (s) order.push_back(s);
        if (s == 0) break;
    }
    std::sort(order.begin(), order.end(), lex_less);
    OrderedPartition cur;
    for (int k = 1; k <= popcount(ground); ++k) extend(ground, k, order, cur, visit);
}

std::vector<OrderedPartition> ordered_partitions(Subset ground) {
    std::vector<OrderedPartition> out;
    for_each_ordered_partition(ground, [&](const OrderedPartition& c) { out.push_back(c); });
    return out;
}

std::uint64_t ordered_partition_count(int n) {
    std::vector<std::uint64_t> a(n + 1, 0);
    a[0] = 1;
    for (int m = 1; m <= n; ++m) {
        std::uint64_t binom = 1;
        for (int k = 1; k <= m; ++k) {
            binom = binom * (m - k + 1) / k;
            a[m] += binom * a[m - k];
        }
    }
    return a[n];
}

MlswContext::MlswContext(const JointDistribution& dist, GroundSet g, std::vector<VarMask> xs, std::vector<VarMask> ys,
                         VarMask side)
    : joint(&dist), ground(std::move(g)), x(std::move(xs)), y(std::move(ys)), z(side) {
    if (static_cast<int>(x.size()) != ground.size() || static_cast<int>(y.size()) != ground.size())
        throw InputError("one X and one Y variable group per label required");
    VarMask seen = z;
    for (int v = 0; v < ground.size(); ++v) {
        if ((seen & x[v]) || (seen & y[v]) || (x[v] & y[v])) throw InputError("variable groups overlap");
        seen |= x[v] | y[v];
    }
    if (seen & ~dist.all()) throw InputError("variable group outside the joint distribution");
}

VarMask MlswContext::x_of(Subset s) const {
    VarMask m = 0;
    for (int v : members(s)) m |= x[v];
    return m;
}

VarMask MlswContext::y_of(Subset s) const {
    VarMask m = 0;
    for (int v : members(s)) m |= y[v];
    return m;
}

namespace {

// Layer k of a block sequence; empty blocks are allowed and still occupy a level.
SetFunction layer_of(const MlswContext& ctx, const OrderedPartition& c, int k) {
    const Subset cur = c.block(k), prev = c.block(k - 1);
    std::vector<VarMask> groups(ctx.ground.size(), 0);
    for (int v = 0; v < ctx.ground.size(); ++v) {
        if (contains_bit(cur, v)) groups[v] |= ctx.x[v];
        if (contains_bit(prev, v)) groups[v] |= ctx.y[v];
    }
    const VarMask side = ctx.x_of(c.before(k)) | ctx.y_of(c.before(k - 1)) | ctx.z;
    return entropy_set_function(*ctx.joint, ctx.ground, groups, side);
}

SetFunction layered_sum(const MlswContext& ctx, const OrderedPartition& c) {
    SetFunction h = layer_of(ctx, c, 1);
    for (int k = 2; k <= c.size() + 1; ++k) h = h + layer_of(ctx, c, k);
    return h;
}

}  // namespace

SetFunction layer_function(const MlswContext& ctx, const OrderedPartition& c, int k) {
    validate_partition(c, ctx.ground.full(), true);
    if (k < 1 || k > c.size() + 1) throw InputError("layer index out of range");
    return layer_of(ctx, c, k);
}

SetFunction partition_function(const MlswContext& ctx, const OrderedPartition& c) {
    validate_partition(c, ctx.ground.full(), true);
    return layered_sum(ctx, c);
}

SetFunction sw_function(const MlswContext& ctx) {
    std::vector<VarMask> groups(ctx.ground.size());
    for (int v = 0; v < ctx.ground.size(); ++v) groups[v] = ctx.x[v] | ctx.y[v];
    return entropy_set_function(*ctx.joint, ctx.ground, groups, ctx.z);
}

namespace {

std::pair<double, Subset> majorization_slack(const SetFunction& h, const Point& rate) {
    if (static_cast<int>(rate.size()) != h.n()) throw InputError("rate dimension does not match ground set");
    const Subset V = h.ground().full();
    auto sums = subset_sums(rate);
    std::pair<double, Subset> best{INFINITY, 0};
    for (Subset s = 1; s <= V; ++s) {
        double slack = sums[s] - (h(V) - h(V & ~s));
        if (slack < best.first) best = {slack, s};
    }
    return best;
}

}  // namespace

std::pair<double, Subset> region_slack(const MlswContext& ctx, const OrderedPartition& c, const Point& rate) {
    return majorization_slack(partition_function(ctx, c), rate);
}

bool region_contains(const MlswContext& ctx, const OrderedPartition& c, const Point& rate, double tol) {
    return region_slack(ctx, c, rate).first >= -tol;
}

bool sw_region_contains(const MlswContext& ctx, const Point& rate, double tol) {
    return majorization_slack(sw_function(ctx), rate).first >= -tol;
}

bool is_suffix_union(const OrderedPartition& c, Subset t) {
    Subset suffix = 0;
    for (int k = c.size(); k >= 1; --k) {
        suffix |= c.block(k);
        if (suffix == t) return true;
    }
    return false;
}

OrderedPartition conjugate_partition(const OrderedPartition& c, Subset t) {
    const Subset g = c.ground();
    validate_partition(c, g);
    if (t == 0 || !is_subset(t, g)) throw InputError("conjugate_partition: cut must be a nonempty subset of the ground");
    if (is_suffix_union(c, t))
        throw InputError("conjugate_partition: cut is a union of trailing blocks; the facet pairing is not defined there");
    OrderedPartition out;
    for (int k = 1; k <= c.size() + 1; ++k) out.blocks.push_back((t & c.block(k - 1)) | (g & ~t & c.block(k)));
    while (out.blocks.back() == 0) out.blocks.pop_back();
    out.blocks.erase(out.blocks.begin(), std::find_if(out.blocks.begin(), out.blocks.end(), [](Subset b) { return b != 0; }));
    return out;
}

ConjugateCheck check_conjugate_facets(const MlswContext& ctx, const OrderedPartition& c, Subset t, int n,
                                      std::uint64_t seed, double tol) {
    const Subset V = ctx.ground.full(), tc = V & ~t;
    const OrderedPartition cs = conjugate_partition(c, t);
    const SetFunction h = partition_function(ctx, c), hs = partition_function(ctx, cs);
    const BasePolytope P(h), Ps(hs);
    ConjugateCheck r;
    for (Subset s = tc;; s = (s - 1) & tc) {
        double lhs = conditional_value(h, s, tc & ~s), rhs = conditional_value(hs, s, V & ~s);
        r.max_identity_error = std::max(r.max_identity_error, std::abs(lhs - rhs));
        if (s == 0) break;
    }
    for (Subset s = t;; s = (s - 1) & t) {
        double lhs = conditional_value(h, s, V & ~s), rhs = conditional_value(hs, s, t & ~s);
        r.max_identity_error = std::max(r.max_identity_error, std::abs(lhs - rhs));
        if (s == 0) break;
    }
    for (const auto& x : sample_points(P, n, seed, SampleMode::on_facet(t))) {
        ++r.samples;
        r.failures += !on_facet(Ps, tc, x, tol);
    }
    for (const auto& x : sample_points(Ps, n, seed + 1, SampleMode::on_facet(tc))) {
        ++r.samples;
        r.failures += !on_facet(P, t, x, tol);
    }
    return r;
}

IdentityReport verify_sw_identity(const MlswContext& ctx, int n, std::uint64_t seed, double tol) {
    const BasePolytope P(sw_function(ctx));
    IdentityReport r;
    r.partitions = ordered_partitions(ctx.ground.full());
    const long long m = static_cast<long long>(r.partitions.size());
    std::vector<SetFunction> hs(m);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < m; ++i) hs[i] = partition_function(ctx, r.partitions[i]);
    std::vector<BasePolytope> family;
    family.reserve(m);
    for (auto& h : hs) family.emplace_back(h);
    r.covering = verify_covering(P, family, n, seed, tol);

    // Rate points: base-polytope samples, half of them pushed up by <= 0.1 bits.
    Rng rng(seed ^ 0xa0761d6478bd642fULL);
    auto pts = sample_points(P, n, seed + 7);
    r.rate_hits.assign(m, 0);
    for (auto& x : pts) {
        if (rng.uniform() < 0.5)
            for (auto& c : x) c += rng.uniform(0.0, 0.1);
        ++r.rate_points;
        int who = -1;
        for (long long i = 0; i < m && who < 0; ++i)
            if (majorization_slack(hs[i], x).first >= -tol) who = static_cast<int>(i);
        if (who < 0)
            ++r.rate_points_uncovered;
        else
            ++r.rate_hits[who];
    }
    return r;
}

}  // namespace swnet
