#include <doctest.h>

#include "helpers.hpp"
#include "swnet/specio.hpp"

using namespace swnet;

namespace {

std::string fixture(const std::string& name) { return std::string(SWNET_FIXTURES) + "/" + name; }

std::string pointer_of(const Json& doc) {
    try {
        parse_spec(doc);
    } catch (const SpecError& e) {
        return e.pointer;
    }
    return "<accepted>";
}

Json identity_doc() {
    return Json::parse(R"({
      "nodes": ["1", "2"],
      "sources": {"nodes": ["1"], "pmf": [0.5, 0.5]},
      "destinations": ["2"],
      "channel": {"kind": "discrete", "inputs": [2, 1], "outputs": [1, 2], "table": [[1, 0], [0, 1]]}
    })");
}

}  // namespace

TEST_CASE("fixtures parse") {
    for (const char* f : {"identity_channel.json", "bernoulli_025.json", "ctx_a.json", "ctx_b.json", "ctx_c.json",
                          "det_relay.json", "useless_relay.json", "siso_gauss.json", "diamond_gauss.json",
                          "gf2_line.json", "ff_q5.json"})
        CHECK_NOTHROW(load_spec(fixture(f)));
    auto sf = load_spec(fixture("det_relay.json"));
    CHECK(sf.net.V() == 3);
    CHECK(sf.aux.has_value());
    CHECK(sf.input.has_value());
    auto c = load_spec(fixture("ctx_c.json"));
    CHECK(c.net.source_dist.size() == 16);
    auto g = load_spec(fixture("diamond_gauss.json"));
    CHECK(g.net.is_gaussian());
    CHECK(std::get<GaussianChannel>(g.net.channel).gain[0][1] == std::complex<double>(2.0, 0.5));
    CHECK(g.rates->size() == 4);
}

TEST_CASE("schema errors carry a JSON pointer") {
    CHECK(pointer_of(identity_doc()) == "<accepted>");
    auto d = identity_doc();
    d["channel"]["table"][0] = {0.7, 0.2};
    CHECK(pointer_of(d) == "/channel/table/0");
    d = identity_doc();
    d.erase("destinations");
    CHECK(pointer_of(d) == "/destinations");
    d = identity_doc();
    d["channel"]["kind"] = "warp";
    CHECK(pointer_of(d) == "/channel/kind");
    d = identity_doc();
    d["sources"]["nodes"] = {"7"};
    CHECK(pointer_of(d) == "/sources/nodes/0");
    d = identity_doc();
    d["sources"]["pmf"] = {0.5, 0.25};
    CHECK(pointer_of(d) == "/sources/pmf");
    d = identity_doc();
    d["channel"] = Json::parse(R"({"kind": "ff", "q": 4, "G": [[0, 0], [1, 0]]})");
    CHECK(pointer_of(d) == "/channel/q");
    d = identity_doc();
    d["channel"] = Json::parse(R"({"kind": "gaussian", "gains": [[0, 1], [0, 0]], "noise": [1, -1]})");
    CHECK(pointer_of(d) == "/channel/noise/1");
    d = identity_doc();
    d["rates"] = {1.0};
    CHECK(pointer_of(d) == "/rates");
    CHECK_THROWS_AS(load_spec(fixture("no_such_file.json")), InputError);
}

TEST_CASE("source generators") {
    auto d = identity_doc();
    d["sources"] = Json::parse(R"({"nodes": ["1"], "generator": {"kind": "bernoulli", "p": 0.25}})");
    auto sf = parse_spec(d);
    CHECK(sf.net.source_dist.probs() == std::vector<double>{0.75, 0.25});
    d["sources"] = Json::parse(R"({"nodes": ["1"], "generator": {"kind": "dirichlet", "alphabet": [3], "seed": 4}})");
    auto a = parse_spec(d), b = parse_spec(d);
    CHECK(a.net.source_dist.probs() == b.net.source_dist.probs());
    CHECK(a.net.source_dist.size() == 3);
}

TEST_CASE("input pmfs") {
    auto sf = parse_spec(identity_doc());
    CHECK(parse_input("uniform", sf.net).size() == 2);
    auto m = parse_input(Json::parse(R"({"marginals": [[0.2, 0.8], [1]]})"), sf.net);
    CHECK(m.probs()[1] == doctest::Approx(0.8));
    CHECK_THROWS_AS(parse_input(Json::parse(R"({"marginals": [[0.2, 0.7], [1]]})"), sf.net), SpecError);
    CHECK_THROWS_AS(parse_input(Json::parse(R"({"pmf": [1]})"), sf.net), SpecError);
}

TEST_CASE("report serialization") {
    OJson j;
    j["third"] = 1.0 / 3.0;
    j["nan"] = NAN;
    j["inf"] = INFINITY;
    j["int"] = 3;
    j["list"] = OJson::array({0.1, true});
    const std::string s = dump_json(j);
    CHECK(s.find("0.33333333333333331") != std::string::npos);
    CHECK(s.find("\"nan\": null") != std::string::npos);
    CHECK(s.find("\"inf\": null") != std::string::npos);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    // round trip is exact
    CHECK(Json::parse(s)["third"].get<double>() == 1.0 / 3.0);
    CHECK(dump_json(j) == s);
}
