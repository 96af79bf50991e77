#include "swnet/specio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace swnet {

namespace {

constexpr double kStochasticTol = 1e-9;

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const Json& need(const Json& j, const std::string& key, const std::string& ptr) {
    if (!j.is_object()) throw SpecError(ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SpecError(at(ptr, key), "missing required key");
    return *it;
}

double num(const Json& j, const std::string& ptr) {
    if (!j.is_number()) throw SpecError(ptr, "expected a number");
    return j.get<double>();
}

int integer(const Json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw SpecError(ptr, "expected an integer");
    return j.get<int>();
}

std::vector<double> numbers(const Json& j, const std::string& ptr) {
    if (!j.is_array()) throw SpecError(ptr, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(num(j[i], at(ptr, i)));
    return out;
}

std::vector<int> integers(const Json& j, const std::string& ptr) {
    if (!j.is_array()) throw SpecError(ptr, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], at(ptr, i)));
    return out;
}

std::string label(const Json& j, const std::string& ptr) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw SpecError(ptr, "expected a node label");
}

int node(const Json& j, const GroundSet& g, const std::string& ptr) {
    std::string l = label(j, ptr);
    for (int i = 0; i < g.size(); ++i)
        if (g.label(i) == l) return i;
    throw SpecError(ptr, "unknown node " + l);
}

Subset node_set(const Json& j, const GroundSet& g, const std::string& ptr) {
    if (!j.is_array()) throw SpecError(ptr, "expected an array of node labels");
    Subset s = 0;
    for (std::size_t i = 0; i < j.size(); ++i) s |= Subset{1} << node(j[i], g, at(ptr, i));
    return s;
}

void check_stochastic(std::vector<double>& row, const std::string& ptr) {
    double s = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (!(row[i] >= 0)) throw SpecError(at(ptr, i), "probabilities must be nonnegative");
        s += row[i];
    }
    if (row.empty() || std::abs(s - 1.0) > kStochasticTol) throw SpecError(ptr, "row does not sum to 1");
    for (auto& x : row) x /= s;
}

// Row-stochastic table as an array of rows, flattened.
std::vector<double> table(const Json& j, std::size_t rows, std::size_t cols, const std::string& ptr) {
    if (!j.is_array() || j.size() != rows)
        throw SpecError(ptr, "expected " + std::to_string(rows) + " rows");
    std::vector<double> out;
    out.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = numbers(j[r], at(ptr, r));
        if (row.size() != cols) throw SpecError(at(ptr, r), "expected " + std::to_string(cols) + " entries");
        check_stochastic(row, at(ptr, r));
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

std::size_t product(const std::vector<int>& cards, const std::string& ptr) {
    std::size_t p = 1;
    for (std::size_t i = 0; i < cards.size(); ++i) {
        if (cards[i] < 1) throw SpecError(at(ptr, i), "alphabet size must be >= 1");
        p *= cards[i];
        if (p > kMaxCells) throw SpecError(ptr, "alphabet product exceeds the 2^24 table cap");
    }
    return p;
}

DiscreteChannel parse_discrete(const Json& j, int V, const std::string& ptr) {
    DiscreteChannel ch;
    ch.in_card = integers(need(j, "inputs", ptr), at(ptr, "inputs"));
    ch.out_card = integers(need(j, "outputs", ptr), at(ptr, "outputs"));
    if (static_cast<int>(ch.in_card.size()) != V) throw SpecError(at(ptr, "inputs"), "one alphabet per node required");
    if (static_cast<int>(ch.out_card.size()) != V) throw SpecError(at(ptr, "outputs"), "one alphabet per node required");
    std::size_t rows = product(ch.in_card, at(ptr, "inputs")), cols = product(ch.out_card, at(ptr, "outputs"));
    if (rows * cols > kMaxCells) throw SpecError(at(ptr, "table"), "channel table exceeds the 2^24 cap");
    ch.table = table(need(j, "table", ptr), rows, cols, at(ptr, "table"));
    return ch;
}

FFChannel parse_ff(const Json& j, int V, const std::string& ptr) {
    FFChannel ch;
    ch.q = integer(need(j, "q", ptr), at(ptr, "q"));
    if (!is_prime(ch.q)) throw SpecError(at(ptr, "q"), "q must be prime");
    const Json& g = need(j, "G", ptr);
    if (!g.is_array() || static_cast<int>(g.size()) != V) throw SpecError(at(ptr, "G"), "G must be V x V");
    for (int r = 0; r < V; ++r) {
        auto row = integers(g[r], at(at(ptr, "G"), r));
        if (static_cast<int>(row.size()) != V) throw SpecError(at(at(ptr, "G"), r), "G must be V x V");
        for (int c = 0; c < V; ++c) {
            if (row[c] < 0 || row[c] >= ch.q) throw SpecError(at(at(at(ptr, "G"), r), c), "entry outside [0, q)");
            if (r == c && row[c] != 0) throw SpecError(at(at(at(ptr, "G"), r), c), "diagonal must be zero");
        }
        ch.G.push_back(row);
    }
    return ch;
}

Channel parse_channel(const Json& j, const GroundSet& g, const std::string& ptr) {
    const int V = g.size();
    const Json& kind_j = need(j, "kind", ptr);
    if (!kind_j.is_string()) throw SpecError(at(ptr, "kind"), "expected a string");
    const std::string kind = kind_j.get<std::string>();
    if (kind == "discrete") return parse_discrete(j, V, ptr);
    if (kind == "ff") return parse_ff(j, V, ptr);
    if (kind == "aref") {
        ArefChannel ch;
        ch.in_card = integers(need(j, "inputs", ptr), at(ptr, "inputs"));
        if (static_cast<int>(ch.in_card.size()) != V) throw SpecError(at(ptr, "inputs"), "one alphabet per node required");
        product(ch.in_card, at(ptr, "inputs"));
        const Json& comps = need(j, "components", ptr);
        if (!comps.is_array()) throw SpecError(at(ptr, "components"), "expected an array");
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string cp = at(at(ptr, "components"), i);
            ArefComponent c;
            c.from = node(need(comps[i], "from", cp), g, at(cp, "from"));
            c.to = node(need(comps[i], "to", cp), g, at(cp, "to"));
            if (c.from == c.to) throw SpecError(cp, "component must join two distinct nodes");
            c.card = integer(need(comps[i], "alphabet", cp), at(cp, "alphabet"));
            if (c.card < 1) throw SpecError(at(cp, "alphabet"), "alphabet size must be >= 1");
            c.table = table(need(comps[i], "table", cp), ch.in_card[c.from], c.card, at(cp, "table"));
            ch.components.push_back(std::move(c));
        }
        return ch;
    }
    if (kind == "sd") {
        SDChannel ch;
        ch.state_pmf = numbers(need(j, "states", ptr), at(ptr, "states"));
        check_stochastic(ch.state_pmf, at(ptr, "states"));
        const Json& chs = need(j, "channels", ptr);
        if (!chs.is_array() || chs.size() != ch.state_pmf.size())
            throw SpecError(at(ptr, "channels"), "one channel per state required");
        for (std::size_t i = 0; i < chs.size(); ++i) {
            const std::string cp = at(at(ptr, "channels"), i);
            const Json& k = need(chs[i], "kind", cp);
            if (k == "discrete") ch.per_state.emplace_back(parse_discrete(chs[i], V, cp));
            else if (k == "ff") ch.per_state.emplace_back(parse_ff(chs[i], V, cp));
            else throw SpecError(at(cp, "kind"), "state channels must be discrete or ff");
        }
        return ch;
    }
    if (kind == "gaussian") {
        GaussianChannel ch;
        const Json& gains = need(j, "gains", ptr);
        const std::string gp = at(ptr, "gains");
        if (!gains.is_array() || static_cast<int>(gains.size()) != V) throw SpecError(gp, "gains must be V x V");
        for (int r = 0; r < V; ++r) {
            const Json& row = gains[r];
            if (!row.is_array() || static_cast<int>(row.size()) != V) throw SpecError(at(gp, r), "gains must be V x V");
            std::vector<std::complex<double>> out;
            for (int c = 0; c < V; ++c) {
                const std::string ep = at(at(gp, r), c);
                if (row[c].is_array()) {
                    if (row[c].size() != 2) throw SpecError(ep, "complex gain must be [re, im]");
                    out.emplace_back(num(row[c][0], at(ep, 0)), num(row[c][1], at(ep, 1)));
                } else {
                    out.emplace_back(num(row[c], ep), 0.0);
                }
            }
            ch.gain.push_back(std::move(out));
        }
        ch.noise = numbers(need(j, "noise", ptr), at(ptr, "noise"));
        if (static_cast<int>(ch.noise.size()) != V) throw SpecError(at(ptr, "noise"), "one noise variance per node required");
        for (int v = 0; v < V; ++v)
            if (!(ch.noise[v] > 0)) throw SpecError(at(at(ptr, "noise"), v), "noise variance must be positive");
        return ch;
    }
    throw SpecError(at(ptr, "kind"), "unknown channel kind " + kind);
}

JointDistribution parse_sources(const Json& j, const NetworkSpec& net, const std::string& ptr) {
    const int k = popcount(net.sources);
    std::vector<std::string> names;
    for (int v : members(net.sources)) names.push_back(u_name(net.nodes, v));
    std::vector<int> cards;
    std::vector<double> pmf;
    if (j.contains("generator")) {
        const std::string gp = at(ptr, "generator");
        const Json& gen = j["generator"];
        const std::string kind = need(gen, "kind", gp).is_string() ? gen["kind"].get<std::string>() : "";
        if (kind == "bernoulli") {
            double p = num(need(gen, "p", gp), at(gp, "p"));
            if (!(p >= 0 && p <= 1)) throw SpecError(at(gp, "p"), "must lie in [0, 1]");
            cards.assign(k, 2);
            std::size_t n = std::size_t{1} << k;
            for (std::size_t c = 0; c < n; ++c) {
                double x = 1;
                for (int i = 0; i < k; ++i) x *= ((c >> i) & 1u) ? p : 1 - p;
                pmf.push_back(x);
            }
        } else if (kind == "uniform" || kind == "dirichlet") {
            cards = gen.contains("alphabet") ? integers(gen["alphabet"], at(gp, "alphabet")) : std::vector<int>(k, 2);
            if (static_cast<int>(cards.size()) != k) throw SpecError(at(gp, "alphabet"), "one alphabet per source required");
            std::size_t n = product(cards, at(gp, "alphabet"));
            if (kind == "uniform") {
                pmf.assign(n, 1.0 / static_cast<double>(n));
            } else {
                double alpha = gen.contains("alpha") ? num(gen["alpha"], at(gp, "alpha")) : 1.0;
                if (!(alpha > 0)) throw SpecError(at(gp, "alpha"), "must be positive");
                std::uint64_t seed = gen.contains("seed") ? gen["seed"].get<std::uint64_t>() : 0;
                Rng rng(seed);
                pmf = rng.dirichlet(n, alpha);
            }
        } else {
            throw SpecError(at(gp, "kind"), "unknown generator " + kind);
        }
    } else {
        pmf = numbers(need(j, "pmf", ptr), at(ptr, "pmf"));
        if (j.contains("alphabet")) {
            cards = integers(j["alphabet"], at(ptr, "alphabet"));
        } else if (k == 1) {
            cards = {static_cast<int>(pmf.size())};
        } else {
            throw SpecError(at(ptr, "alphabet"), "required with more than one source");
        }
        if (static_cast<int>(cards.size()) != k) throw SpecError(at(ptr, "alphabet"), "one alphabet per source required");
        if (pmf.size() != product(cards, at(ptr, "alphabet"))) throw SpecError(at(ptr, "pmf"), "size does not match alphabets");
        check_stochastic(pmf, at(ptr, "pmf"));
    }
    double s = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    for (auto& x : pmf) x /= s;
    std::vector<Variable> vars;
    for (int i = 0; i < k; ++i) vars.push_back({names[i], cards[i]});
    return JointDistribution(vars, pmf);
}

AuxSpec parse_aux(const Json& j, const NetworkSpec& net, const std::string& ptr) {
    AuxSpec aux;
    const int V = net.V();
    aux.q_pmf = j.contains("q") ? numbers(j["q"], at(ptr, "q")) : std::vector<double>{1.0};
    check_stochastic(aux.q_pmf, at(ptr, "q"));
    const std::size_t nq = aux.q_pmf.size();
    const Json& inputs = need(j, "inputs", ptr);
    const Json& yc = need(j, "yhat_alphabet", ptr);
    const Json& quant = need(j, "quantizers", ptr);
    if (!inputs.is_array() || static_cast<int>(inputs.size()) != V) throw SpecError(at(ptr, "inputs"), "one entry per node required");
    if (!quant.is_array() || static_cast<int>(quant.size()) != V) throw SpecError(at(ptr, "quantizers"), "one entry per node required");
    aux.yhat_card = integers(yc, at(ptr, "yhat_alphabet"));
    if (static_cast<int>(aux.yhat_card.size()) != V) throw SpecError(at(ptr, "yhat_alphabet"), "one entry per node required");
    for (int v = 0; v < V; ++v) {
        if (aux.yhat_card[v] < 1) throw SpecError(at(at(ptr, "yhat_alphabet"), v), "alphabet size must be >= 1");
        const int nx = input_card(net, v), ny = output_card(net, v);
        aux.input.push_back(table(inputs[v], nq, nx, at(at(ptr, "inputs"), v)));
        aux.quantizer.push_back(table(quant[v], static_cast<std::size_t>(nx) * ny * nq, aux.yhat_card[v],
                                      at(at(ptr, "quantizers"), v)));
    }
    return aux;
}

}  // namespace

JointDistribution parse_input(const Json& j, const NetworkSpec& net, const std::string& ptr) {
    if (j.is_string()) {
        if (j.get<std::string>() != "uniform") throw SpecError(ptr, "expected \"uniform\" or an object");
        return uniform_input(net);
    }
    if (j.contains("marginals")) {
        const Json& m = j["marginals"];
        if (!m.is_array() || static_cast<int>(m.size()) != net.V())
            throw SpecError(at(ptr, "marginals"), "one marginal per node required");
        std::vector<std::vector<double>> marg;
        for (int v = 0; v < net.V(); ++v) {
            auto row = numbers(m[v], at(at(ptr, "marginals"), v));
            if (static_cast<int>(row.size()) != input_card(net, v))
                throw SpecError(at(at(ptr, "marginals"), v), "size does not match the input alphabet");
            check_stochastic(row, at(at(ptr, "marginals"), v));
            marg.push_back(row);
        }
        return product_input(net.nodes, marg);
    }
    auto pmf = numbers(need(j, "pmf", ptr), at(ptr, "pmf"));
    std::vector<Variable> vars;
    std::size_t n = 1;
    for (int v = 0; v < net.V(); ++v) {
        vars.push_back({x_name(net.nodes, v), input_card(net, v)});
        n *= vars.back().card;
    }
    if (pmf.size() != n) throw SpecError(at(ptr, "pmf"), "size does not match the input alphabets");
    check_stochastic(pmf, at(ptr, "pmf"));
    return JointDistribution(vars, pmf);
}

SpecFile parse_spec(const Json& doc) {
    if (!doc.is_object()) throw SpecError("", "spec must be a JSON object");
    SpecFile sf;
    const Json& nodes = need(doc, "nodes", "");
    if (!nodes.is_array() || nodes.empty()) throw SpecError("/nodes", "expected a nonempty array of labels");
    if (nodes.size() > static_cast<std::size_t>(kMaxGround)) throw SpecError("/nodes", "at most 16 nodes supported");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < nodes.size(); ++i) labels.push_back(label(nodes[i], at("/nodes", i)));
    try {
        sf.net.nodes = GroundSet(labels);
    } catch (const std::exception& e) {
        throw SpecError("/nodes", e.what());
    }
    const Json& src = need(doc, "sources", "");
    sf.net.sources = node_set(need(src, "nodes", "/sources"), sf.net.nodes, "/sources/nodes");
    if (!sf.net.sources) throw SpecError("/sources/nodes", "at least one source required");
    sf.net.destinations = node_set(need(doc, "destinations", ""), sf.net.nodes, "/destinations");
    if (!sf.net.destinations) throw SpecError("/destinations", "at least one destination required");
    sf.net.source_dist = parse_sources(src, sf.net, "/sources");
    sf.net.channel = parse_channel(need(doc, "channel", ""), sf.net.nodes, "/channel");
    try {
        sf.net.validate();
    } catch (const InputError& e) {
        throw SpecError("/channel", e.what());
    }
    if (doc.contains("aux")) sf.aux = parse_aux(doc["aux"], sf.net, "/aux");
    if (doc.contains("input")) sf.input = parse_input(doc["input"], sf.net, "/input");
    if (doc.contains("rates")) {
        sf.rates = numbers(doc["rates"], "/rates");
        if (static_cast<int>(sf.rates->size()) != sf.net.V()) throw SpecError("/rates", "one rate per node required");
        for (std::size_t i = 0; i < sf.rates->size(); ++i)
            if (!((*sf.rates)[i] >= 0)) throw SpecError(at("/rates", i), "rates must be nonnegative");
    }
    return sf;
}

SpecFile load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SpecError("", std::string("malformed JSON: ") + e.what());
    }
    return parse_spec(doc);
}

namespace {

void emit(const OJson& j, std::string& out, int indent) {
    const std::string pad(indent, ' '), pad2(indent + 2, ' ');
    switch (j.type()) {
        case OJson::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad2 + OJson(it.key()).dump() + ": ";
                emit(it.value(), out, indent + 2);
            }
            out += "\n" + pad + "}";
            return;
        }
        case OJson::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad2;
                emit(j[i], out, indent + 2);
            }
            out += "\n" + pad + "]";
            return;
        }
        case OJson::value_t::number_float: {
            double x = j.get<double>();
            if (!std::isfinite(x)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_json(const OJson& j) {
    std::string out;
    emit(j, out, 0);
    return out + "\n";
}

OJson to_json(const CutReport& c, const GroundSet& g) {
    OJson j;
    j["set"] = g.format(c.set);
    j["destination"] = c.destination >= 0 ? OJson(g.label(c.destination)) : OJson(nullptr);
    j["cut"] = g.format(c.cut);
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["slack"] = c.slack;
    j["feasible"] = c.feasible;
    if (c.vacuous) j["vacuous"] = true;
    return j;
}

OJson to_json(const FeasibilityReport& r, const GroundSet& g) {
    OJson j;
    j["condition"] = r.condition;
    j["feasible"] = r.feasible;
    j["min_slack"] = r.min_slack;
    OJson b = OJson::array();
    for (const auto& c : r.binding) b.push_back(to_json(c, g));
    j["binding_constraints"] = b;
    return j;
}

OJson to_json(const GaussianCutResult& c, const GroundSet& g) {
    OJson j;
    j["cut"] = g.format(c.cut);
    j["destination"] = g.label(c.destination);
    j["cwf"] = c.cwf;
    j["inner"] = c.inner;
    j["kappa"] = c.kappa;
    j["gap"] = c.gap;
    return j;
}

}  // namespace swnet
