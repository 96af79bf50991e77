#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "swnet/mlsw.hpp"

using namespace swnet;

namespace {

std::vector<std::string> names(char c, Subset s) {
    std::vector<std::string> out;
    for (int i : members(s)) out.push_back(std::string(1, c) + std::to_string(i + 1));
    return out;
}

// V=2 instance where X1 depends on Y2 given X2, so corner A separates the
// single-block and the [{2},{1}] layerings.
JointDistribution corner_instance() {
    // variables X1, X2, Y1, Y2 (binary); X2, Y2 fair and independent, X1 = Y2
    // through a BSC(0.1), Y1 = X1 xor fair coin with bias 0.3
    std::vector<double> p(16, 0.0);
    for (int x2 = 0; x2 < 2; ++x2)
        for (int y2 = 0; y2 < 2; ++y2)
            for (int x1 = 0; x1 < 2; ++x1)
                for (int y1 = 0; y1 < 2; ++y1) {
                    const double px1 = x1 == y2 ? 0.9 : 0.1;
                    const double py1 = y1 == x1 ? 0.7 : 0.3;
                    p[x1 + 2 * x2 + 4 * y1 + 8 * y2] = 0.25 * px1 * py1;
                }
    return JointDistribution({{"X1", 2}, {"X2", 2}, {"Y1", 2}, {"Y2", 2}}, p);
}

}  // namespace

TEST_CASE("ordered partitions") {
    auto two = ordered_partitions(0b11);
    REQUIRE(two.size() == 3);
    CHECK(two[0].blocks == std::vector<Subset>{0b11});
    CHECK(two[1].blocks == std::vector<Subset>{0b01, 0b10});
    CHECK(two[2].blocks == std::vector<Subset>{0b10, 0b01});
    CHECK(ordered_partitions(0b1).size() == 1);
    CHECK(ordered_partitions(0b111).size() == 13);
    // Fubini numbers by recurrence
    std::vector<std::uint64_t> a{1};
    for (int n = 1; n <= 8; ++n) {
        std::uint64_t s = 0, binom = 1;
        for (int k = 1; k <= n; ++k) {
            binom = binom * (n - k + 1) / k;
            s += binom * a[n - k];
        }
        a.push_back(s);
        CHECK(ordered_partition_count(n) == s);
    }
    CHECK(ordered_partitions(0b1111).size() == 75);
    CHECK(ordered_partitions(0b101).size() == 3);
    CHECK_THROWS_AS(ordered_partitions(0x1ff), CapError);
    // each emitted exactly once
    auto four = ordered_partitions(0b1111);
    for (std::size_t i = 0; i < four.size(); ++i)
        for (std::size_t j = i + 1; j < four.size(); ++j) CHECK_FALSE(four[i] == four[j]);
    CHECK_THROWS_AS(validate_partition({{0b01, 0b01}}, 0b11), InputError);
    CHECK_THROWS_AS(validate_partition({{0b01}}, 0b11), InputError);
    CHECK_THROWS_AS(validate_partition({{0b01, 0, 0b10}}, 0b11), InputError);
}

TEST_CASE("layer functions") {
    Rng rng(41);
    for (int t = 0; t < 5; ++t) {
        auto d = random_two_component_joint(3, rng);
        auto ctx = two_component_context(d, 3);
        for (const auto& c : ordered_partitions(0b111)) {
            auto h1 = layer_function(ctx, c, 1);
            for (Subset s = 0; s < 8; ++s)
                CHECK(std::abs(h1(s) - oracle::entropy(d, names('X', s & c.block(1)))) < 1e-12);
            // generic layer against the oracle
            for (int k = 1; k <= c.size() + 1; ++k) {
                auto hk = layer_function(ctx, c, k);
                CHECK(is_submodular(hk));
                const auto given = oracle::join(names('X', c.before(k)), names('Y', c.before(k - 1)));
                for (Subset s = 0; s < 8; ++s) {
                    auto vars = oracle::join(names('X', s & c.block(k)), names('Y', s & c.block(k - 1)));
                    CHECK(std::abs(hk(s) - oracle::cond(d, vars, given)) < 1e-12);
                }
            }
            CHECK_THROWS_AS(layer_function(ctx, c, 0), InputError);
            CHECK_THROWS_AS(layer_function(ctx, c, c.size() + 2), InputError);
        }
        OrderedPartition single{{0b111}};
        auto h2 = layer_function(ctx, single, 2);
        for (Subset s = 0; s < 8; ++s)
            CHECK(std::abs(h2(s) - oracle::cond(d, names('Y', s), names('X', 0b111))) < 1e-12);
    }
}

TEST_CASE("partition functions") {
    Rng rng(43);
    SUBCASE("independent components") {
        // all four variables mutually independent
        std::vector<double> p(16, 1.0);
        for (int v = 0; v < 4; ++v) {
            const double q = rng.uniform(0.05, 0.95);
            for (int cell = 0; cell < 16; ++cell) p[cell] *= (cell >> v & 1) ? q : 1 - q;
        }
        JointDistribution d({{"X1", 2}, {"X2", 2}, {"Y1", 2}, {"Y2", 2}}, p);
        auto ctx = two_component_context(d, 2);
        auto h = sw_function(ctx);
        for (const auto& c : ordered_partitions(0b11)) {
            auto hc = partition_function(ctx, c);
            for (Subset s = 0; s < 4; ++s) CHECK(hc(s) == doctest::Approx(h(s)).epsilon(1e-12));
        }
    }
    SUBCASE("chain rule and conditioning") {
        for (int t = 0; t < 5; ++t) {
            auto d = random_two_component_joint(3, rng);
            auto ctx = two_component_context(d, 3);
            auto h = sw_function(ctx);
            for (const auto& c : ordered_partitions(0b111)) {
                auto hc = partition_function(ctx, c);
                CHECK(is_submodular(hc));
                CHECK(std::abs(hc(0b111) - oracle::entropy(d, {"X1", "X2", "X3", "Y1", "Y2", "Y3"})) < 1e-12);
                for (Subset s = 1; s < 8; ++s)
                    CHECK(conditional_value(hc, s, 7 & ~s) >= conditional_value(h, s, 7 & ~s) - kDefaultTol);
                // sum of K+1 layers
                std::vector<double> sum(8, 0.0);
                for (int k = 1; k <= c.size() + 1; ++k) {
                    auto hk = layer_function(ctx, c, k);
                    for (Subset s = 0; s < 8; ++s) sum[s] += hk(s);
                }
                for (Subset s = 0; s < 8; ++s) CHECK(std::abs(sum[s] - hc(s)) < 1e-12);
            }
        }
    }
}

TEST_CASE("regions and corner points") {
    auto d = corner_instance();
    auto ctx = two_component_context(d, 2);
    const Point A{oracle::cond(d, {"X1", "Y1"}, {"X2", "Y2"}), oracle::entropy(d, {"X2", "Y2"})};
    const OrderedPartition two_layer{{0b11}}, three_layer{{0b10, 0b01}};
    CHECK(sw_region_contains(ctx, A));
    CHECK(region_contains(ctx, three_layer, A));
    CHECK_FALSE(region_contains(ctx, two_layer, A));
    auto [slack, where] = region_slack(ctx, two_layer, A);
    CHECK(slack < -1e-6);
    CHECK(where == 0b01);
    // below the sum rate
    CHECK_FALSE(region_contains(ctx, three_layer, {A[0] - 0.01, A[1]}));

    // independent components: marginal entropies lie in every region
    JointDistribution ind({{"X1", 2}, {"X2", 2}, {"Y1", 2}, {"Y2", 2}}, std::vector<double>(16, 1.0 / 16));
    auto ictx = two_component_context(ind, 2);
    for (const auto& c : ordered_partitions(0b11)) CHECK(region_contains(ictx, c, {2, 2}));

    // fully redundant pair: R1 + R2 >= H, R_i >= 0
    JointDistribution red({{"X1", 2}, {"X2", 2}, {"Y1", 2}, {"Y2", 2}},
                          {0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.5});
    auto rctx = two_component_context(red, 2);
    CHECK(sw_region_contains(rctx, {0, 1}));
    CHECK(sw_region_contains(rctx, {0.4, 0.6}));
    CHECK_FALSE(sw_region_contains(rctx, {0.4, 0.5}));
    CHECK_FALSE(sw_region_contains(rctx, {-0.1, 1.5}));

    // every point of a partition region is in the Slepian-Wolf region
    Rng rng(45);
    for (int t = 0; t < 5; ++t) {
        auto dd = random_two_component_joint(2, rng);
        auto cc = two_component_context(dd, 2);
        for (const auto& c : ordered_partitions(0b11))
            for (auto x : sample_points(BasePolytope(partition_function(cc, c)), 50, t)) {
                for (auto& v : x) v += rng.uniform(0, 0.05);
                CHECK(sw_region_contains(cc, x));
            }
    }
}

TEST_CASE("conjugate partitions") {
    const OrderedPartition a{{0b01, 0b10}}, b{{0b11}};
    CHECK(conjugate_partition(a, 0b01).blocks == std::vector<Subset>{0b11});
    CHECK(conjugate_partition(b, 0b01).blocks == std::vector<Subset>{0b10, 0b01});
    CHECK(is_suffix_union(a, 0b10));
    CHECK(is_suffix_union(a, 0b11));
    CHECK_FALSE(is_suffix_union(a, 0b01));
    CHECK_THROWS_AS(conjugate_partition(a, 0b10), InputError);
    CHECK_THROWS_AS(conjugate_partition(b, 0b11), InputError);
    // an interior level can be idle; dropping it would merge two levels
    const OrderedPartition chain{{0b001, 0b010, 0b100}};
    CHECK(conjugate_partition(chain, 0b010).blocks == std::vector<Subset>{0b001, 0, 0b110});
    CHECK_NOTHROW(validate_partition(conjugate_partition(chain, 0b010), 0b111, true));
    CHECK_THROWS_AS(validate_partition({{0, 0b11}}, 0b11, true), InputError);

    Rng rng(47);
    for (int t = 0; t < 3; ++t) {
        auto d = random_two_component_joint(3, rng);
        auto ctx = two_component_context(d, 3);
        for (const auto& c : ordered_partitions(0b111))
            for (Subset cut = 1; cut < 7; ++cut) {
                if (is_suffix_union(c, cut)) continue;
                auto cs = conjugate_partition(c, cut);
                CHECK_FALSE(cs == c);
                auto r = check_conjugate_facets(ctx, c, cut, 40, 100 + cut);
                CHECK(r.pass());
                CHECK(r.max_identity_error < 1e-12);
            }
    }
}

TEST_CASE("Slepian-Wolf identity") {
    Rng rng(49);
    SUBCASE("independent components") {
        JointDistribution ind({{"X1", 2}, {"X2", 2}, {"Y1", 2}, {"Y2", 2}}, std::vector<double>(16, 1.0 / 16));
        CHECK(verify_sw_identity(two_component_context(ind, 2), 100, 1).pass());
    }
    SUBCASE("corner A is covered by the three-layer partition") {
        auto d = corner_instance();
        auto ctx = two_component_context(d, 2);
        auto r = verify_sw_identity(ctx, 300, 3);
        CHECK(r.pass());
        REQUIRE(r.partitions.size() == 3);
        const Point A{oracle::cond(d, {"X1", "Y1"}, {"X2", "Y2"}), oracle::entropy(d, {"X2", "Y2"})};
        int witness = -1;
        for (std::size_t i = 0; i < r.partitions.size() && witness < 0; ++i)
            if (region_contains(ctx, r.partitions[i], A)) witness = static_cast<int>(i);
        CHECK(witness == 2);
    }
    SUBCASE("random three-node instances") {
        for (int t = 0; t < 5; ++t) {
            auto d = random_two_component_joint(3, rng);
            CHECK(verify_sw_identity(two_component_context(d, 3), 200, t).pass());
        }
    }
}
