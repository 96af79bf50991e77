#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "swnet/specio.hpp"

using namespace swnet;

namespace {

std::string fixture(const std::string& name) { return std::string(SWNET_FIXTURES) + "/" + name; }

std::vector<std::string> vars(const std::string& prefix, Subset s) {
    std::vector<std::string> out;
    for (int v : members(s)) out.push_back(prefix + std::to_string(v + 1));
    return out;
}

void singleton_yhat(const NetworkSpec& net, AuxSpec& aux, int v) {
    aux.yhat_card[v] = 1;
    const std::size_t rows = static_cast<std::size_t>(input_card(net, v)) * output_card(net, v) * aux.q_pmf.size();
    aux.quantizer[v].assign(rows, 1.0);
}

const CutReport& binding_for(const FeasibilityReport& r, Subset s, int d) {
    for (const auto& c : r.binding)
        if (c.set == s && c.destination == d) return c;
    throw std::runtime_error("no binding cut");
}

// Compress-and-forward cut value recomputed from scratch with the oracle.
double cut_value_oracle(const JointDistribution& j, Subset full, Subset w, int d) {
    const Subset wc = full & ~w, rest = wc & ~(Subset{1} << d);
    auto obs = oracle::join({"Y" + std::to_string(d + 1)}, vars("Yhat", rest));
    auto q = std::vector<std::string>{"Q"};
    return oracle::mi(j, vars("X", w), obs, oracle::join(vars("X", wc), q)) -
           oracle::mi(j, vars("Y", w), vars("Yhat", w), oracle::join(oracle::join(vars("X", full), obs), q));
}

}  // namespace

TEST_CASE("cut-set necessary condition") {
    auto net = fx::identity_network(0.5);
    auto in = uniform_input(net);
    auto r = cutset_necessary(net, in);
    CHECK_FALSE(r.feasible);
    REQUIRE(r.binding.size() == 1);
    CHECK(r.binding[0].lhs == doctest::Approx(1.0));
    CHECK(r.binding[0].rhs == doctest::Approx(1.0));
    CHECK(std::abs(r.binding[0].slack) < 1e-12);

    auto r2 = cutset_necessary(fx::identity_network(0.25), in);
    CHECK(r2.feasible);
    CHECK(r2.min_slack == doctest::Approx(1.0 - fx::h2(0.25)));

    // a source set with no residual entropy never binds
    auto b = load_spec(fixture("ctx_b.json"));
    auto rb = cutset_necessary(b.net, *b.input);
    CHECK(rb.feasible);
    CHECK(binding_for(rb, 0b01, 2).vacuous);
    CHECK(binding_for(rb, 0b11, 2).slack == doctest::Approx(1.0));
    // the other fixed-source fixture sits on the boundary
    auto a = load_spec(fixture("ctx_a.json"));
    CHECK_FALSE(cutset_necessary(a.net, *a.input).feasible);
}

TEST_CASE("sufficient condition at fixed auxiliaries") {
    SUBCASE("point-to-point reduces to H(U) < I(X;Y)") {
        auto net = fx::identity_network(0.25);
        auto aux = fx::yhat_equals_y(net, {{0.5, 0.5}, {1.0}}, 0);
        auto r = sufficient_theorem2(net, aux);
        CHECK(r.feasible);
        CHECK(r.binding[0].rhs == doctest::Approx(1.0));
        CHECK(r.binding[0].lhs == doctest::Approx(fx::h2(0.25)));
    }
    SUBCASE("deterministic network with Yhat = Y") {
        Rng rng(71);
        for (int t = 0; t < 5; ++t) {
            NetworkSpec net;
            net.nodes = GroundSet::numbered(3);
            net.sources = 0b011;
            net.destinations = 0b100;
            net.source_dist = JointDistribution({{"U1", 2}, {"U2", 2}}, rng.dirichlet(4));
            DiscreteChannel ch;
            ch.in_card = {2, 2, 2};
            ch.out_card = {2, 2, 2};
            for (int r = 0; r < 8; ++r) {
                const int y = rng.below(8);
                for (int c = 0; c < 8; ++c) ch.table.push_back(c == y);
            }
            net.channel = ch;
            std::vector<std::vector<double>> marg{rng.dirichlet(2), rng.dirichlet(2), rng.dirichlet(2)};
            auto aux = fx::yhat_equals_y(net, marg);
            auto joint = channel_joint(net, aux);
            const EntropyCache H(joint);
            const NetworkVars nv(joint, net.nodes);
            for (Subset w = 1; w < 8; ++w) {
                if (contains_bit(w, 2)) continue;
                const Subset wc = 7 & ~w;
                CHECK(std::abs(theorem2_cut_value(H, nv, 7, w, 2) - oracle::cond(joint, vars("Y", wc), vars("X", wc))) < 1e-9);
            }
            // matches the deterministic specialization and the cut-set verdict
            auto input = product_input(net.nodes, marg);
            auto t2 = sufficient_theorem2(net, aux);
            auto det = specialized_condition(net, SpecialKind::deterministic, &input);
            auto cs = cutset_necessary(net, input);
            CHECK(t2.feasible == det.feasible);
            CHECK(cs.feasible == det.feasible);
            CHECK(t2.min_slack == doctest::Approx(cs.min_slack).epsilon(1e-9));
        }
    }
    SUBCASE("relay cut values against an independent recomputation") {
        Rng rng(73);
        for (int t = 0; t < 5; ++t) {
            auto net = random_discrete_network(3, 0b001, 0b100, rng);
            auto aux = random_aux(net, rng, 2, 2);
            auto joint = channel_joint(net, aux);
            const EntropyCache H(joint);
            const NetworkVars nv(joint, net.nodes);
            for (Subset w : {0b001u, 0b011u})
                CHECK(std::abs(theorem2_cut_value(H, nv, 7, w, 2) - cut_value_oracle(joint, 7, w, 2)) < 1e-9);
        }
    }
    SUBCASE("cut-set values dominate at the same product input") {
        Rng rng(74);
        for (int t = 0; t < 10; ++t) {
            auto net = random_discrete_network(3, 0b001, 0b100, rng);
            auto aux = random_aux(net, rng, 1, 2);
            auto joint = channel_joint(net, aux);
            const EntropyCache H(joint);
            const NetworkVars nv(joint, net.nodes);
            auto io = input_output_joint(net, product_input(net.nodes, aux.input));
            const EntropyCache Hio(io);
            const NetworkVars nio(io, net.nodes);
            for (Subset w : {0b001u, 0b011u}) {
                const Subset wc = 7 & ~w;
                CHECK(Hio.I(nio.X(w), nio.Y(wc), nio.X(wc)) >= theorem2_cut_value(H, nv, 7, w, 2) - kDefaultTol);
            }
        }
    }
}

TEST_CASE("per-partition and unified conditions") {
    Rng rng(75);
    SUBCASE("decoding order matters") {
        // U1 = U2 ~ Bernoulli(0.3); only node 1 reaches node 3, noiselessly.
        NetworkSpec net;
        net.nodes = GroundSet::numbered(3);
        net.sources = 0b011;
        net.destinations = 0b100;
        net.source_dist = JointDistribution({{"U1", 2}, {"U2", 2}}, {0.7, 0, 0, 0.3});
        DiscreteChannel ch;
        ch.in_card = {2, 1, 1};
        ch.out_card = {1, 1, 2};
        ch.table = {1, 0, 0, 1};
        net.channel = ch;
        auto aux = fx::yhat_equals_y(net, {{0.5, 0.5}, {1.0}, {1.0}}, 0);
        const OrderedPartition first{{0b01, 0b10}}, second{{0b10, 0b01}};
        auto ra = per_partition_sufficient(net, aux, {{2, first}});
        auto rb = per_partition_sufficient(net, aux, {{2, second}});
        CHECK(ra.feasible);
        CHECK(std::abs(ra.min_slack) < 1e-12);  // node 2 has nothing to send and no budget
        CHECK(binding_for(ra, 0b01, 2).slack == doctest::Approx(1 - fx::h2(0.3)));
        CHECK_FALSE(rb.feasible);
        CHECK(binding_for(rb, 0b10, 2).slack == doctest::Approx(-fx::h2(0.3)));
        CHECK(rb.min_slack == doctest::Approx(-fx::h2(0.3)));
        CHECK(unified_sufficient(net, aux).feasible);
    }

    auto net = random_discrete_network(3, 0b011, 0b100, rng);
    auto aux = random_aux(net, rng);
    CHECK_THROWS_AS(per_partition_sufficient(net, aux, {{0, OrderedPartition{{0b110}}}}), InputError);
    CHECK_THROWS_AS(per_partition_sufficient(net, aux, {{2, OrderedPartition{{0b001}}}}), InputError);
}

TEST_CASE("budget and information forms of the cut value agree") {
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
        auto net = random_discrete_network(3, 0b001, 0b110, rng);
        auto aux = random_aux(net, rng, 2, 2);
        auto joint = channel_joint(net, aux);
        const EntropyCache H(joint);
        const NetworkVars nv(joint, net.nodes);
        for (int d : {1, 2})
            for (Subset w = 1; w < 8; ++w) {
                if (contains_bit(w, d)) continue;
                CHECK(std::abs(cut_value_budget_form(H, nv, w, d) - cut_value_information_form(H, nv, w, d)) < 1e-9);
                CHECK(std::abs(cut_value_information_form(H, nv, w, d) - theorem2_cut_value(H, nv, 7, w, d)) < 1e-9);
            }
    }
}

TEST_CASE("constraint removal") {
    auto det = load_spec(fixture("det_relay.json"));
    auto none = remove_additional_constraints(det.net, *det.aux, 2);
    CHECK(none.removed == 0);
    CHECK(none.kept == 0b111);

    auto useless = load_spec(fixture("useless_relay.json"));
    auto rr = remove_additional_constraints(useless.net, *useless.aux, 2);
    CHECK(rr.removed == 0b010);
    CHECK(rr.monotone);
    auto before = sufficient_theorem2(useless.net, *useless.aux);
    auto after = sufficient_theorem2_reduced(useless.net, *useless.aux);
    CHECK_FALSE(before.feasible);
    CHECK(after.feasible);
    CHECK(after.min_slack >= before.min_slack);
    CHECK(after.removed.at(2) == 0b010);

    // both relays are noise receivers: only the source remains
    NetworkSpec net;
    net.nodes = GroundSet::numbered(4);
    net.sources = 0b0001;
    net.destinations = 0b1000;
    net.source_dist = fx::bernoulli(0.25, "U1");
    DiscreteChannel ch;
    ch.in_card = {2, 1, 1, 1};
    ch.out_card = {1, 2, 2, 2};
    for (int x = 0; x < 2; ++x)
        for (int c = 0; c < 8; ++c) ch.table.push_back(((c >> 2) & 1) == x ? 0.25 : 0.0);
    net.channel = ch;
    AuxSpec aux = fx::yhat_equals_y(net, {{0.5, 0.5}, {1.0}, {1.0}, {1.0}}, 0b0110);
    auto all = remove_additional_constraints(net, aux, 3);
    CHECK(all.removed == 0b0110);
    CHECK(sufficient_theorem2_reduced(net, aux).feasible);
}

TEST_CASE("specialized conditions") {
    auto gf = load_spec(fixture("gf2_line.json"));
    auto rf = specialized_condition(gf.net, SpecialKind::finite_field, nullptr);
    CHECK(rf.feasible);
    CHECK(rf.binding[0].rhs == 1.0);
    CHECK(rf.binding[0].lhs == doctest::Approx(fx::h2(0.25)));

    // aref against the deterministic condition on the expanded channel
    Rng rng(79);
    NetworkSpec ar;
    ar.nodes = GroundSet::numbered(3);
    ar.sources = 0b001;
    ar.destinations = 0b100;
    ar.source_dist = fx::bernoulli(0.2, "U1");
    ArefChannel ac;
    ac.in_card = {2, 2, 2};
    for (int from = 0; from < 3; ++from)
        for (int to = 0; to < 3; ++to)
            if (from != to) {
                std::vector<double> t;
                for (int x = 0; x < 2; ++x) {
                    const int y = rng.below(2);
                    t.push_back(y == 0);
                    t.push_back(y == 1);
                }
                ac.components.push_back({from, to, 2, t});
            }
    ar.channel = ac;
    auto input = product_input(ar.nodes, {{0.4, 0.6}, {0.5, 0.5}, {0.3, 0.7}});
    auto ra = specialized_condition(ar, SpecialKind::aref, &input);
    auto rd = specialized_condition(aref_to_discrete(ar), SpecialKind::deterministic, &input);
    REQUIRE(ra.binding.size() == rd.binding.size());
    for (std::size_t i = 0; i < ra.binding.size(); ++i) CHECK(std::abs(ra.binding[i].rhs - rd.binding[i].rhs) < 1e-9);

    // a single-state network behaves as its only state
    NetworkSpec sd = gf.net;
    sd.channel = SDChannel{{1.0}, {std::get<FFChannel>(gf.net.channel)}};
    auto rs = specialized_condition(sd, SpecialKind::state_dependent, nullptr);
    CHECK(rs.feasible == rf.feasible);
    CHECK(rs.min_slack == doctest::Approx(rf.min_slack));

    // kind mismatches are input errors
    CHECK_THROWS_AS(specialized_condition(gf.net, SpecialKind::aref, &input), InputError);
    auto noisy = random_discrete_network(3, 1, 4, rng);
    auto nin = uniform_input(noisy);
    CHECK_THROWS_AS(specialized_condition(noisy, SpecialKind::deterministic, &nin), InputError);
    CHECK(parse_special_kind("semi-aref") == SpecialKind::semi_aref);
    CHECK_THROWS_AS(parse_special_kind("bogus"), InputError);
}

TEST_CASE("rate regions") {
    Rng rng(81);
    auto net = random_discrete_network(3, 0b111, 0b100, rng);
    auto aux = random_aux(net, rng, 1, 2);
    CHECK(achievable_rate_region(net, aux, {0, 0, 0}).feasible);
    CHECK_THROWS_AS(achievable_rate_region(net, aux, {-1, 0, 0}), InputError);

    SUBCASE("single relay") {
        for (int t = 0; t < 5; ++t) {
            auto rn = random_discrete_network(3, 0b001, 0b100, rng);
            auto ra = random_aux(rn, rng, 1, 2);
            singleton_yhat(rn, ra, 0);
            singleton_yhat(rn, ra, 2);
            auto j = channel_joint(rn, ra);
            const double direct = std::max(
                0.0, std::min(oracle::mi(j, {"X1"}, {"Y3", "Yhat2"}, {"X2", "X3"}),
                              oracle::mi(j, {"X1", "X2"}, {"Y3"}, {"X3"}) -
                                  oracle::mi(j, {"Y2"}, {"Yhat2"}, {"X1", "X2", "X3", "Y3"})));
            auto r = achievable_rate_region(rn, ra, {0.1, 0, 0});
            CHECK(std::abs(binding_for(r, 0b001, 2).rhs - direct) < 1e-9);
        }
    }
    SUBCASE("two-way relay") {
        for (int t = 0; t < 5; ++t) {
            auto rn = random_discrete_network(3, 0b011, 0b011, rng);
            auto ra = random_aux(rn, rng, 1, 2);
            singleton_yhat(rn, ra, 0);
            singleton_yhat(rn, ra, 1);
            auto j = channel_joint(rn, ra);
            auto r = achievable_rate_region(rn, ra, {0.1, 0.1, 0});
            for (int dir = 0; dir < 2; ++dir) {
                const std::string a = std::to_string(dir + 1), b = std::to_string(2 - dir);
                const double direct = std::max(
                    0.0, std::min(oracle::mi(j, {"X" + a}, {"Y" + b, "Yhat3"}, {"X" + b, "X3"}),
                                  oracle::mi(j, {"X" + a, "X3"}, {"Y" + b}, {"X" + b}) -
                                      oracle::mi(j, {"Y3"}, {"Yhat3"}, {"X1", "X2", "X3", "Y" + b})));
                CHECK(std::abs(binding_for(r, Subset{1} << dir, 1 - dir).rhs - direct) < 1e-9);
            }
        }
    }
}
