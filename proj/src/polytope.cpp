#include "swnet/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swnet/kernels.hpp"

namespace swnet {

SubmodularityResult is_submodular(const SetFunction& f, double tol) {
    SubmodularityResult r;
    if (auto v = kernels::omp::submodular_scan(f.values(), f.n(), tol)) {
        r.ok = false;
        r.a = v->a;
        r.b = v->b;
        r.excess = v->excess;
    }
    return r;
}

BasePolytope::BasePolytope(SetFunction f, double tol) : f_(std::move(f)) {
    auto r = is_submodular(f_, tol);
    if (!r)
        throw InputError("set function is not submodular: f(A&B)+f(A|B) > f(A)+f(B) for A=" +
                         f_.ground().format(r.a) + ", B=" + f_.ground().format(r.b));
}

BasePolytope essential_polytope(const SetFunction& f) { return BasePolytope(f); }

std::vector<double> subset_sums(const Point& x) {
    const std::size_t N = std::size_t{1} << x.size();
    std::vector<double> s(N, 0.0);
    for (std::size_t m = 1; m < N; ++m) s[m] = s[m & (m - 1)] + x[std::countr_zero(m)];
    return s;
}

double min_slack(const BasePolytope& P, const Point& x) {
    if (static_cast<int>(x.size()) != P.n()) throw InputError("point dimension does not match ground set");
    const Subset V = P.ground().full();
    auto sums = subset_sums(x);
    double slack = -std::abs(sums[V] - P.f()(V));
    for (Subset s = 1; s < V; ++s) slack = std::min(slack, sums[s] - P.lower_bound(s));
    return slack;
}

bool contains(const BasePolytope& P, const Point& x, double tol) { return min_slack(P, x) >= -tol; }

bool on_facet(const BasePolytope& P, Subset t, const Point& x, double tol) {
    if (!contains(P, x, tol)) return false;
    auto sums = subset_sums(x);
    return std::abs(sums[t] - P.lower_bound(t)) <= tol;
}

bool majorizes(const Point& q, const BasePolytope& P, double tol) {
    if (static_cast<int>(q.size()) != P.n()) throw InputError("point dimension does not match ground set");
    const Subset V = P.ground().full();
    auto sums = subset_sums(q);
    for (Subset s = 1; s <= V; ++s)
        if (sums[s] < P.lower_bound(s) - tol) return false;
    return true;
}

Point greedy_vertex(const BasePolytope& P, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != P.n()) throw InputError("permutation length does not match ground set");
    Point x(P.n(), 0.0);
    Subset prefix = 0, seen = 0;
    for (int v : perm) {
        if (v < 0 || v >= P.n() || contains_bit(seen, v)) throw InputError("not a permutation of the ground set");
        seen |= 1u << v;
        Subset next = prefix | (1u << v);
        x[v] = P.f()(next) - P.f()(prefix);
        prefix = next;
    }
    return x;
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::vector<Point> sample_points(const BasePolytope& P, int n, std::uint64_t seed, SampleMode mode) {
    const int V = P.n();
    const Subset full = P.ground().full();
    if (mode.facet && (mode.cut == 0 || mode.cut == full || !is_subset(mode.cut, full)))
        throw InputError("facet sampling needs a nonempty proper subset");
    if (n < 1) throw InputError("sample count must be at least 1");
    Rng rng(seed);
    const int k = V + 1;
    std::vector<Point> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        auto w = rng.dirichlet(k);
        Point x(V, 0.0);
        for (int j = 0; j < k; ++j) {
            std::vector<int> perm;
            if (mode.facet) {
                // complement first, cut last: the cut inequality is tight
                auto head = members(full & ~mode.cut), tail = members(mode.cut);
                auto ph = rng.permutation(static_cast<int>(head.size()));
                auto pt = rng.permutation(static_cast<int>(tail.size()));
                for (int a : ph) perm.push_back(head[a]);
                for (int a : pt) perm.push_back(tail[a]);
            } else {
                perm = rng.permutation(V);
            }
            auto v = greedy_vertex(P, perm);
            for (int c = 0; c < V; ++c) x[c] += w[j] * v[c];
        }
        out.push_back(std::move(x));
    }
    return out;
}

FacetDecomposition facet_decompose(const SetFunction& f, Subset t) {
    const Subset V = f.ground().full();
    if (t == 0 || t == V || !is_subset(t, V)) throw InputError("facet_decompose: cut must be a nonempty proper subset");
    const Subset tc = V & ~t;
    const int nt = popcount(t), nc = popcount(tc);
    std::vector<double> inner(std::size_t{1} << nt), outer(std::size_t{1} << nc);
    for (Subset s = 0; s < inner.size(); ++s) inner[s] = f(deposit_bits(s, t) | tc) - f(tc);
    for (Subset s = 0; s < outer.size(); ++s) outer[s] = f(deposit_bits(s, tc));
    return {t, SetFunction(f.ground().restrict(t), std::move(inner)), SetFunction(f.ground().restrict(tc), std::move(outer))};
}

Point restrict_point(const Point& x, Subset s) {
    Point out;
    for (int i : members(s)) out.push_back(x[i]);
    return out;
}

Point combine_points(const Point& a, Subset s, const Point& b, int n) {
    Point x(n);
    std::size_t ia = 0, ib = 0;
    for (int i = 0; i < n; ++i) x[i] = contains_bit(s, i) ? a.at(ia++) : b.at(ib++);
    return x;
}

MinkowskiReport minkowski_check(const SetFunction& f1, const SetFunction& f2, int n, std::uint64_t seed,
                                double vertex_tol, double tol) {
    if (!(f1.ground() == f2.ground())) throw InputError("minkowski_check: ground sets differ");
    BasePolytope P1(f1), P2(f2), P12(f1 + f2);
    MinkowskiReport r;
    for (const auto& perm : all_permutations(f1.n())) {
        auto a = greedy_vertex(P1, perm), b = greedy_vertex(P2, perm), c = greedy_vertex(P12, perm);
        ++r.permutations;
        bool bad = false;
        for (int i = 0; i < f1.n(); ++i) {
            double err = std::abs(c[i] - (a[i] + b[i]));
            r.max_vertex_error = std::max(r.max_vertex_error, err);
            if (vertex_tol == 0 ? c[i] != a[i] + b[i] : err > vertex_tol) bad = true;
        }
        r.vertex_mismatches += bad;
    }
    auto s1 = sample_points(P1, n, seed), s2 = sample_points(P2, n, seed ^ 0x5bd1e995ULL);
    for (int i = 0; i < n; ++i) {
        Point x(f1.n());
        for (int c = 0; c < f1.n(); ++c) x[c] = s1[i][c] + s2[i][c];
        ++r.samples;
        r.samples_outside += !contains(P12, x, tol);
    }
    return r;
}

namespace {

constexpr std::size_t kMaxListed = 16;
constexpr int kAllPermsMax = 6;

int first_cover(const std::vector<BasePolytope>& family, const Point& x, double tol) {
    for (std::size_t m = 0; m < family.size(); ++m)
        if (contains(family[m], x, tol)) return static_cast<int>(m);
    return -1;
}

void cover_batch(const std::vector<BasePolytope>& family, const std::vector<Point>& pts, double tol,
                 CoveringReport& r) {
    const long long n = static_cast<long long>(pts.size());
    std::vector<int> who(pts.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < n; ++i) who[i] = first_cover(family, pts[i], tol);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ++r.samples_tested;
        if (who[i] >= 0) {
            ++r.member_hits[who[i]];
        } else if (r.uncovered_count++ < kMaxListed) {
            r.uncovered.push_back(pts[i]);
        }
    }
}

}  // namespace

CoveringReport verify_covering(const BasePolytope& P, const std::vector<BasePolytope>& family, int n,
                               std::uint64_t seed, double tol) {
    if (family.empty()) throw InputError("verify_covering: empty family");
    for (const auto& m : family)
        if (!(m.ground() == P.ground())) throw InputError("verify_covering: ground sets differ");
    CoveringReport r;
    r.member_hits.assign(family.size(), 0);
    const int V = P.n();

    // (i) every member vertex lies in P
    std::vector<std::vector<int>> perms;
    if (V <= kAllPermsMax) {
        perms = all_permutations(V);
    } else {
        Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        for (int i = 0; i < n; ++i) perms.push_back(rng.permutation(V));
    }
    for (std::size_t m = 0; m < family.size(); ++m)
        for (const auto& perm : perms) {
            auto v = greedy_vertex(family[m], perm);
            if (!contains(P, v, tol)) {
                if (r.containment_failure_count++ < kMaxListed) r.containment_failures.push_back({m, perm, v});
            }
        }

    // (ii) interior coverage
    cover_batch(family, sample_points(P, n, seed), tol, r);

    // (iii) facet coverage
    const Subset full = P.ground().full();
    for (Subset t = 1; t < full; ++t) {
        auto pts = sample_points(P, n, seed + 0x100000001ULL * t, SampleMode::on_facet(t));
        ++r.facets_tested;
        bool degenerate = true;
        for (const auto& x : pts)
            for (int c = 0; c < V && degenerate; ++c)
                if (std::abs(x[c] - pts[0][c]) > tol) degenerate = false;
        r.degenerate_facets += degenerate;
        cover_batch(family, pts, tol, r);
    }
    return r;
}

}  // namespace swnet
