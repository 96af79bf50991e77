#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swnet/setfunc.hpp"

namespace swnet {

// f(S | T) = f(S u T) - f(T)
inline double conditional_value(const SetFunction& f, Subset s, Subset t) { return f(s | t) - f(t); }

struct SubmodularityResult {
    bool ok = true;
    Subset a = 0, b = 0;  // first violating pair when !ok
    double excess = 0;
    explicit operator bool() const { return ok; }
};

SubmodularityResult is_submodular(const SetFunction& f, double tol = kDefaultTol);

// Base polytope {x : x(V) = f(V), x(S) >= f(S | S^c)}, kept as f.
class BasePolytope {
public:
    explicit BasePolytope(SetFunction f, double tol = kDefaultTol);

    const SetFunction& f() const { return f_; }
    const GroundSet& ground() const { return f_.ground(); }
    int n() const { return f_.n(); }
    double lower_bound(Subset s) const { return f_(f_.ground().full()) - f_(f_.ground().full() & ~s); }
    std::size_t num_inequalities() const { return (std::size_t{1} << n()) - 2; }

private:
    SetFunction f_;
};

BasePolytope essential_polytope(const SetFunction& f);

// Sums x_S for every S.
std::vector<double> subset_sums(const Point& x);

bool contains(const BasePolytope& P, const Point& x, double tol = kDefaultTol);
// Minimum over the constraints of (x_S - f(S|S^c)), with the equality folded in
// as -|x_V - f(V)|.
double min_slack(const BasePolytope& P, const Point& x);
bool on_facet(const BasePolytope& P, Subset t, const Point& x, double tol = kDefaultTol);
// Exists x in P with x <= q componentwise.
bool majorizes(const Point& q, const BasePolytope& P, double tol = kDefaultTol);

// perm lists ground positions; x_{perm[i]} = f(prefix_i) - f(prefix_{i-1}).
Point greedy_vertex(const BasePolytope& P, const std::vector<int>& perm);
std::vector<std::vector<int>> all_permutations(int n);

struct SampleMode {
    bool facet = false;
    Subset cut = 0;
    static SampleMode interior() { return {}; }
    static SampleMode on_facet(Subset t) { return {true, t}; }
};

std::vector<Point> sample_points(const BasePolytope& P, int n, std::uint64_t seed,
                                 SampleMode mode = SampleMode::interior());

struct FacetDecomposition {
    Subset cut = 0;
    SetFunction inner;  // on T: S -> f(S | T^c)
    SetFunction outer;  // on T^c: S -> f(S)
};

FacetDecomposition facet_decompose(const SetFunction& f, Subset t);
// Restrict a point to the coordinates in `s`, in ground order.
Point restrict_point(const Point& x, Subset s);
// Inverse: place `a` on coordinates of s and `b` on the rest.
Point combine_points(const Point& a, Subset s, const Point& b, int n);

struct MinkowskiReport {
    std::size_t permutations = 0, vertex_mismatches = 0;
    double max_vertex_error = 0;
    std::size_t samples = 0, samples_outside = 0;
    bool pass() const { return vertex_mismatches == 0 && samples_outside == 0; }
};

// vertex_tol = 0 requires bit-exact vertex identities.
MinkowskiReport minkowski_check(const SetFunction& f1, const SetFunction& f2, int n, std::uint64_t seed,
                                double vertex_tol = 0.0, double tol = kDefaultTol);

struct ContainmentFailure {
    std::size_t member = 0;
    std::vector<int> perm;
    Point vertex;
};

struct CoveringReport {
    std::size_t samples_tested = 0;
    std::size_t facets_tested = 0;
    std::size_t degenerate_facets = 0;
    std::size_t uncovered_count = 0, containment_failure_count = 0;
    // First few witnesses of each failure kind.
    std::vector<Point> uncovered;
    std::vector<ContainmentFailure> containment_failures;
    // Per family member, how many samples it was the first to cover.
    std::vector<std::size_t> member_hits;
    bool pass() const { return uncovered_count == 0 && containment_failure_count == 0; }
};

// Randomized closed-covering check of P by the family.
CoveringReport verify_covering(const BasePolytope& P, const std::vector<BasePolytope>& family, int n,
                               std::uint64_t seed, double tol = kDefaultTol);

}  // namespace swnet
