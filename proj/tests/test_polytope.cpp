#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "swnet/polytope.hpp"

using namespace swnet;

TEST_CASE("conditional values") {
    auto fa = fx::entropy_fn(fx::ctx_a()), fb = fx::entropy_fn(fx::ctx_b());
    CHECK(conditional_value(fa, 0b01, 0b10) == doctest::Approx(1.0));
    CHECK(std::abs(conditional_value(fb, 0b01, 0b10)) < 1e-15);
    CHECK(conditional_value(fa, 0b11, 0) == fa(0b11));
}

TEST_CASE("submodularity checks") {
    Rng rng(2);
    for (int t = 0; t < 10; ++t) CHECK(is_submodular(fx::entropy_fn(random_two_component_joint(2, rng))));
    auto sq = is_submodular(fx::table_fn(2, {0, 1, 1, 4}));
    CHECK_FALSE(sq.ok);
    CHECK(((sq.a == 0b01 && sq.b == 0b10) || (sq.a == 0b10 && sq.b == 0b01)));
    CHECK(sq.excess == doctest::Approx(2.0));
    CHECK(is_submodular(fx::table_fn(3, {0, 1.5, -2, -0.5, 4, 5.5, 2, 3.5})));  // modular
    // larger ground sets use the increment test
    CHECK(is_submodular(random_submodular(12, rng)));
    std::vector<double> bad(1 << 12);
    for (std::size_t s = 0; s < bad.size(); ++s) bad[s] = std::popcount(s) * std::popcount(s);
    CHECK_FALSE(is_submodular(fx::table_fn(12, bad)).ok);
}

TEST_CASE("essential polytopes of fixed sources") {
    BasePolytope A(fx::entropy_fn(fx::ctx_a())), B(fx::entropy_fn(fx::ctx_b()));
    CHECK(contains(A, {1, 1}));
    CHECK_FALSE(contains(A, {0.5, 1.5}));
    CHECK(contains(B, {0.3, 0.7}));
    CHECK(contains(B, {0, 1}));
    CHECK_FALSE(contains(B, {-0.1, 1.1}));
    CHECK_FALSE(contains(B, {0.5, 0.6}));
    CHECK(A.num_inequalities() == 2);
    Rng rng(1);
    CHECK(BasePolytope(random_submodular(5, rng)).num_inequalities() == 30);
    CHECK_THROWS_AS(essential_polytope(fx::table_fn(2, {0, 1, 1, 4})), InputError);
    try {
        essential_polytope(fx::table_fn(2, {0, 1, 1, 4}));
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("{1}") != std::string::npos);
    }
    CHECK_THROWS_AS(contains(A, {1, 1, 1}), InputError);
}

TEST_CASE("majorization") {
    BasePolytope A(fx::entropy_fn(fx::ctx_a()));
    CHECK(majorizes({1, 1}, A));
    CHECK_FALSE(majorizes({0.9, 1.5}, A));
    CHECK(majorizes({3, 1}, A));

    // inequality form agrees with an explicit LP witness search
    Rng rng(314);
    int agree = 0, yes = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + t % 3;
        const BasePolytope P(random_submodular(n, rng));
        auto x = sample_points(P, 1, 1000 + t)[0];
        for (auto& c : x) c += rng.uniform(-0.4, 0.4);
        const bool a = majorizes(x, P), b = oracle::majorizes_by_witness(x, P);
        agree += a == b;
        yes += a;
    }
    CHECK(agree == 1000);
    CHECK(yes > 50);
    CHECK(yes < 950);
}

TEST_CASE("greedy vertices") {
    BasePolytope A(fx::entropy_fn(fx::ctx_a())), B(fx::entropy_fn(fx::ctx_b()));
    CHECK(greedy_vertex(B, {0, 1}) == Point{1, 0});
    CHECK(greedy_vertex(B, {1, 0}) == Point{0, 1});
    for (const auto& p : all_permutations(2)) CHECK(greedy_vertex(A, p) == Point{1, 1});
    CHECK_THROWS_AS(greedy_vertex(A, {0, 0}), InputError);

    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const BasePolytope P(random_submodular(4, rng));
        const auto perms = all_permutations(4);
        CHECK(perms.size() == 24);
        for (const auto& p : perms) {
            auto v = greedy_vertex(P, p);
            CHECK(contains(P, v));
            CHECK(min_slack(P, v) >= -1e-12);
        }
    }
}

TEST_CASE("sampling") {
    BasePolytope A(fx::entropy_fn(fx::ctx_a()));
    auto pts = sample_points(A, 5, 1);
    CHECK(pts.size() == 5);
    for (const auto& x : pts) {
        CHECK(std::abs(x[0] - 1) < 1e-12);
        CHECK(std::abs(x[1] - 1) < 1e-12);
    }

    Rng rng(4);
    const BasePolytope P(random_submodular(4, rng));
    auto a = sample_points(P, 50, 77), b = sample_points(P, 50, 77);
    CHECK(a == b);
    for (const auto& x : a) CHECK(contains(P, x));
    for (Subset t = 1; t < 15; ++t)
        for (const auto& x : sample_points(P, 20, t, SampleMode::on_facet(t))) {
            CHECK(contains(P, x));
            CHECK(on_facet(P, t, x));
            const auto s = subset_sums(x);
            CHECK(std::abs(s[t] - P.lower_bound(t)) <= 1e-9);
        }
    CHECK_THROWS_AS(sample_points(P, 5, 1, SampleMode::on_facet(0)), InputError);
    CHECK_THROWS_AS(sample_points(P, 5, 1, SampleMode::on_facet(15)), InputError);
    CHECK_THROWS_AS(sample_points(P, 0, 1), InputError);
}

TEST_CASE("facet decomposition") {
    auto fb = fx::entropy_fn(fx::ctx_b());
    auto d = facet_decompose(fb, 0b01);
    CHECK(std::abs(d.inner(1)) < 1e-15);
    CHECK(d.outer(1) == doctest::Approx(1.0));
    CHECK(contains(BasePolytope(d.inner), {0.0}));
    CHECK(contains(BasePolytope(d.outer), {1.0}));
    CHECK_THROWS_AS(facet_decompose(fb, 0), InputError);
    CHECK_THROWS_AS(facet_decompose(fb, 0b11), InputError);

    Rng rng(12);
    for (int t = 0; t < 10; ++t) {
        const int n = 2 + t % 4;
        const SetFunction f = random_submodular(n, rng);
        const Subset full = f.ground().full();
        for (Subset cut = 1; cut < full; ++cut) {
            auto fd = facet_decompose(f, cut);
            CHECK(is_submodular(fd.inner));
            CHECK(is_submodular(fd.outer));
            // both projections are nonempty: their greedy vertices are members
            CHECK(contains(BasePolytope(fd.inner), greedy_vertex(BasePolytope(fd.inner), all_permutations(popcount(cut))[0])));
            CHECK(contains(BasePolytope(fd.outer),
                           greedy_vertex(BasePolytope(fd.outer), all_permutations(popcount(full & ~cut))[0])));
        }
    }
}

TEST_CASE("Minkowski sums") {
    auto fa = fx::entropy_fn(fx::ctx_a());
    BasePolytope S(fa + fa);
    CHECK(contains(S, {2, 2}));
    auto r = minkowski_check(fa, fa, 20, 1);
    CHECK(r.pass());
    auto m1 = fx::table_fn(3, {0, 1, 2, 3, 4, 5, 6, 7}), m2 = fx::table_fn(3, {0, -1, 0.5, -0.5, 2, 1, 2.5, 1.5});
    CHECK(minkowski_check(m1, m2, 20, 2).pass());
    Rng rng(6);
    auto r2 = minkowski_check(random_integer_submodular(4, rng), random_integer_submodular(4, rng), 100, 3);
    CHECK(r2.permutations == 24);
    CHECK(r2.pass());
    CHECK_THROWS_AS(minkowski_check(fa, m1, 1, 1), InputError);
}

TEST_CASE("covering verification") {
    Rng rng(21);
    const BasePolytope P(random_submodular(3, rng));
    auto self = verify_covering(P, {P}, 100, 5);
    CHECK(self.pass());
    CHECK(self.facets_tested == 6);

    // A sub-segment of the copy-source segment misses the vertex (0, 1).
    const BasePolytope B(fx::entropy_fn(fx::ctx_b()));
    const BasePolytope shrunk(fx::table_fn(2, {0, 1, 0.8, 1}));
    CHECK_FALSE(contains(shrunk, {0, 1}));
    auto r = verify_covering(B, {shrunk}, 200, 9);
    CHECK_FALSE(r.pass());
    CHECK(r.containment_failure_count == 0);
    REQUIRE(r.uncovered_count > 0);
    for (const auto& x : r.uncovered) {
        CHECK(contains(B, x));
        CHECK_FALSE(contains(shrunk, x));
    }
}
