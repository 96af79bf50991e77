#include "swnet/netmodel.hpp"

#include <cmath>
#include <numeric>

namespace swnet {

namespace {

constexpr double kRowTol = 1e-9;

std::size_t product(const std::vector<int>& cards) {
    std::size_t p = 1;
    for (int c : cards) {
        p *= static_cast<std::size_t>(c);
        if (p > kMaxCells) throw CapError("alphabet product exceeds 2^24");
    }
    return p;
}

void check_rows(const std::vector<double>& table, std::size_t rows, std::size_t cols, const std::string& what) {
    if (table.size() != rows * cols)
        throw InputError(what + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) + " table");
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            double p = table[r * cols + c];
            if (!(p >= 0)) throw InputError(what + ": negative entry in row " + std::to_string(r));
            s += p;
        }
        if (std::abs(s - 1.0) > kRowTol) throw InputError(what + ": row " + std::to_string(r) + " does not sum to 1");
    }
}

void check_pmf(const std::vector<double>& p, const std::string& what) { check_rows(p, 1, p.size(), what); }

std::vector<int> aref_out_cards(const ArefChannel& ch, int V) {
    std::vector<int> out(V, 1);
    for (const auto& c : ch.components) out[c.to] *= c.card;
    return out;
}

void validate_discrete(const DiscreteChannel& ch, int V) {
    if (static_cast<int>(ch.in_card.size()) != V || static_cast<int>(ch.out_card.size()) != V)
        throw InputError("discrete channel: one input and one output alphabet per node required");
    for (int c : ch.in_card)
        if (c < 1) throw InputError("discrete channel: alphabet sizes must be >= 1");
    for (int c : ch.out_card)
        if (c < 1) throw InputError("discrete channel: alphabet sizes must be >= 1");
    std::size_t rows = product(ch.in_card), cols = product(ch.out_card);
    if (rows * cols > kMaxCells) throw CapError("discrete channel table exceeds 2^24 cells");
    check_rows(ch.table, rows, cols, "discrete channel");
}

void validate_ff(const FFChannel& ch, int V) {
    if (!is_prime(ch.q)) throw InputError("finite-field channel: q = " + std::to_string(ch.q) + " is not prime");
    if (static_cast<int>(ch.G.size()) != V) throw InputError("finite-field channel: G must be V x V");
    for (int r = 0; r < V; ++r) {
        if (static_cast<int>(ch.G[r].size()) != V) throw InputError("finite-field channel: G must be V x V");
        for (int c = 0; c < V; ++c) {
            int g = ch.G[r][c];
            if (g < 0 || g >= ch.q) throw InputError("finite-field channel: entries must lie in [0, q)");
            if (r == c && g != 0) throw InputError("finite-field channel: G must have a zero diagonal");
        }
    }
}

void validate_aref(const ArefChannel& ch, int V) {
    if (static_cast<int>(ch.in_card.size()) != V) throw InputError("aref channel: one input alphabet per node required");
    std::vector<std::vector<char>> seen(V, std::vector<char>(V, 0));
    for (const auto& c : ch.components) {
        if (c.from < 0 || c.from >= V || c.to < 0 || c.to >= V || c.from == c.to)
            throw InputError("aref channel: component endpoints invalid");
        if (seen[c.from][c.to]++) throw InputError("aref channel: duplicate component");
        if (c.card < 1) throw InputError("aref channel: component alphabet must be >= 1");
        check_rows(c.table, ch.in_card[c.from], c.card, "aref component");
    }
}

// Decode mixed-radix digits (first fastest).
void digits_of(std::size_t idx, const std::vector<int>& cards, std::vector<int>& d) {
    d.resize(cards.size());
    for (std::size_t i = 0; i < cards.size(); ++i) {
        d[i] = static_cast<int>(idx % cards[i]);
        idx /= cards[i];
    }
}

std::size_t index_of(const std::vector<int>& d, const std::vector<int>& cards) {
    std::size_t idx = 0, stride = 1;
    for (std::size_t i = 0; i < cards.size(); ++i) {
        idx += d[i] * stride;
        stride *= cards[i];
    }
    return idx;
}

DiscreteChannel ff_as_discrete(const FFChannel& ch, int V) {
    DiscreteChannel out;
    out.in_card.assign(V, ch.q);
    out.out_card.assign(V, ch.q);
    std::size_t n = product(out.in_card);
    if (n * n > kMaxCells) throw CapError("finite-field channel too large for a dense table");
    out.table.assign(n * n, 0.0);
    std::vector<int> x, y(V);
    for (std::size_t r = 0; r < n; ++r) {
        digits_of(r, out.in_card, x);
        for (int v = 0; v < V; ++v) {
            long long s = 0;
            for (int u = 0; u < V; ++u) s += static_cast<long long>(ch.G[v][u]) * x[u];
            y[v] = static_cast<int>(s % ch.q);
        }
        out.table[r * n + index_of(y, out.out_card)] = 1.0;
    }
    return out;
}

DiscreteChannel aref_as_discrete(const ArefChannel& ch, int V) {
    DiscreteChannel out;
    out.in_card = ch.in_card;
    out.out_card = aref_out_cards(ch, V);
    std::size_t rows = product(out.in_card), cols = product(out.out_card);
    if (rows * cols > kMaxCells) throw CapError("aref channel too large for a dense table");
    out.table.assign(rows * cols, 0.0);
    // components of each receiver in node order of the transmitter
    std::vector<std::vector<const ArefComponent*>> into(V);
    for (int to = 0; to < V; ++to)
        for (int from = 0; from < V; ++from)
            for (const auto& c : ch.components)
                if (c.from == from && c.to == to) into[to].push_back(&c);
    std::vector<int> x, y;
    for (std::size_t r = 0; r < rows; ++r) {
        digits_of(r, out.in_card, x);
        for (std::size_t col = 0; col < cols; ++col) {
            digits_of(col, out.out_card, y);
            double p = 1.0;
            for (int to = 0; to < V && p > 0; ++to) {
                int rest = y[to];
                for (const auto* c : into[to]) {
                    int yc = rest % c->card;
                    rest /= c->card;
                    p *= c->table[x[c->from] * c->card + yc];
                }
            }
            out.table[r * cols + col] = p;
        }
    }
    return out;
}

DiscreteChannel state_as_discrete(const std::variant<DiscreteChannel, FFChannel>& ch, int V) {
    if (auto* d = std::get_if<DiscreteChannel>(&ch)) return *d;
    return ff_as_discrete(std::get<FFChannel>(ch), V);
}

}  // namespace

bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

void NetworkSpec::validate() const {
    const int n = V();
    if (n == 0) throw InputError("network has no nodes");
    const Subset full = nodes.full();
    if (sources == 0 || !is_subset(sources, full)) throw InputError("sources must be a nonempty subset of the nodes");
    if (destinations == 0 || !is_subset(destinations, full))
        throw InputError("destinations must be a nonempty subset of the nodes");
    if (static_cast<int>(source_dist.num_vars()) != popcount(sources))
        throw InputError("source distribution needs one variable per source node");
    std::visit(
        [&](const auto& ch) {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, DiscreteChannel>) {
                validate_discrete(ch, n);
            } else if constexpr (std::is_same_v<T, FFChannel>) {
                validate_ff(ch, n);
            } else if constexpr (std::is_same_v<T, ArefChannel>) {
                validate_aref(ch, n);
            } else if constexpr (std::is_same_v<T, SDChannel>) {
                if (ch.per_state.empty() || ch.per_state.size() != ch.state_pmf.size())
                    throw InputError("state-dependent channel: one channel per state required");
                check_pmf(ch.state_pmf, "state pmf");
                std::vector<int> in, out;
                for (const auto& s : ch.per_state) {
                    std::vector<int> si, so;
                    if (auto* d = std::get_if<DiscreteChannel>(&s)) {
                        validate_discrete(*d, n);
                        si = d->in_card;
                        so = d->out_card;
                    } else {
                        const auto& f = std::get<FFChannel>(s);
                        validate_ff(f, n);
                        si.assign(n, f.q);
                        so.assign(n, f.q);
                    }
                    if (in.empty()) {
                        in = si;
                        out = so;
                    } else if (in != si || out != so) {
                        throw InputError("state-dependent channel: alphabets differ across states");
                    }
                }
            } else {
                if (static_cast<int>(ch.gain.size()) != n || static_cast<int>(ch.noise.size()) != n)
                    throw InputError("gaussian channel: gain must be V x V and one noise variance per node");
                for (const auto& row : ch.gain)
                    if (static_cast<int>(row.size()) != n) throw InputError("gaussian channel: gain must be V x V");
                for (double s : ch.noise)
                    if (!(s > 0)) throw InputError("gaussian channel: noise variances must be positive");
            }
        },
        channel);
}

int input_card(const NetworkSpec& net, int v) {
    return std::visit(
        [&](const auto& ch) -> int {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, DiscreteChannel> || std::is_same_v<T, ArefChannel>) return ch.in_card[v];
            else if constexpr (std::is_same_v<T, FFChannel>) return ch.q;
            else if constexpr (std::is_same_v<T, SDChannel>) return state_as_discrete(ch.per_state[0], net.V()).in_card[v];
            else throw InputError("gaussian networks have continuous alphabets");
        },
        net.channel);
}

int output_card(const NetworkSpec& net, int v) {
    return std::visit(
        [&](const auto& ch) -> int {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, DiscreteChannel>) return ch.out_card[v];
            else if constexpr (std::is_same_v<T, ArefChannel>) return aref_out_cards(ch, net.V())[v];
            else if constexpr (std::is_same_v<T, FFChannel>) return ch.q;
            else if constexpr (std::is_same_v<T, SDChannel>) return state_as_discrete(ch.per_state[0], net.V()).out_card[v];
            else throw InputError("gaussian networks have continuous alphabets");
        },
        net.channel);
}

std::string q_name() { return "Q"; }
std::string u_name(const GroundSet& g, int v) { return "U" + g.label(v); }
std::string x_name(const GroundSet& g, int v) { return "X" + g.label(v); }
std::string y_name(const GroundSet& g, int v) { return "Y" + g.label(v); }
std::string yhat_name(const GroundSet& g, int v) { return "Yhat" + g.label(v); }

DiscreteChannel as_discrete(const NetworkSpec& net) {
    const int V = net.V();
    return std::visit(
        [&](const auto& ch) -> DiscreteChannel {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, DiscreteChannel>) return ch;
            else if constexpr (std::is_same_v<T, ArefChannel>) return aref_as_discrete(ch, V);
            else if constexpr (std::is_same_v<T, FFChannel>) return ff_as_discrete(ch, V);
            else if constexpr (std::is_same_v<T, SDChannel>) {
                // state unknown to the nodes: mixture over states
                DiscreteChannel mix = state_as_discrete(ch.per_state[0], V);
                for (auto& p : mix.table) p *= ch.state_pmf[0];
                for (std::size_t s = 1; s < ch.per_state.size(); ++s) {
                    auto d = state_as_discrete(ch.per_state[s], V);
                    for (std::size_t i = 0; i < mix.table.size(); ++i) mix.table[i] += ch.state_pmf[s] * d.table[i];
                }
                return mix;
            } else {
                throw InputError("gaussian networks have no discrete form");
            }
        },
        net.channel);
}

NetworkSpec aref_to_discrete(const NetworkSpec& net) {
    if (!std::holds_alternative<ArefChannel>(net.channel)) throw InputError("aref_to_discrete: not an aref network");
    NetworkSpec out = net;
    out.channel = aref_as_discrete(std::get<ArefChannel>(net.channel), net.V());
    return out;
}

NetworkSpec ff_to_discrete(const NetworkSpec& net) {
    if (!std::holds_alternative<FFChannel>(net.channel)) throw InputError("ff_to_discrete: not a finite-field network");
    NetworkSpec out = net;
    out.channel = ff_as_discrete(std::get<FFChannel>(net.channel), net.V());
    return out;
}

void validate_aux(const NetworkSpec& net, const AuxSpec& aux) {
    const int V = net.V();
    check_pmf(aux.q_pmf, "time-sharing pmf");
    if (static_cast<int>(aux.input.size()) != V || static_cast<int>(aux.yhat_card.size()) != V ||
        static_cast<int>(aux.quantizer.size()) != V)
        throw InputError("aux: one input pmf and one quantizer per node required");
    const std::size_t nq = aux.q_pmf.size();
    for (int v = 0; v < V; ++v) {
        const std::string who = " of node " + net.nodes.label(v);
        check_rows(aux.input[v], nq, input_card(net, v), "input pmf" + who);
        if (aux.yhat_card[v] < 1) throw InputError("quantizer alphabet" + who + " must be >= 1");
        check_rows(aux.quantizer[v], static_cast<std::size_t>(input_card(net, v)) * output_card(net, v) * nq,
                   aux.yhat_card[v], "quantizer" + who);
    }
}

namespace {

Factorization joint_factors(const NetworkSpec& net, const AuxSpec& aux, bool with_sources, const DiscreteChannel& ch) {
    const int V = net.V();
    const GroundSet& g = net.nodes;
    Factorization f;
    f.variables.push_back({q_name(), static_cast<int>(aux.q_pmf.size())});
    f.factors.push_back({{q_name()}, {}, aux.q_pmf});
    if (with_sources) {
        Factor fu;
        std::size_t i = 0;
        for (int v : members(net.sources)) {
            f.variables.push_back({u_name(g, v), net.source_dist.vars()[i++].card});
            fu.children.push_back(u_name(g, v));
        }
        fu.table = net.source_dist.probs();
        f.factors.push_back(std::move(fu));
    }
    for (int v = 0; v < V; ++v) {
        f.variables.push_back({x_name(g, v), ch.in_card[v]});
        f.factors.push_back({{x_name(g, v)}, {q_name()}, aux.input[v]});
    }
    Factor fy;
    for (int v = 0; v < V; ++v) {
        f.variables.push_back({y_name(g, v), ch.out_card[v]});
        fy.children.push_back(y_name(g, v));
        fy.parents.push_back(x_name(g, v));
    }
    fy.table = ch.table;
    f.factors.push_back(std::move(fy));
    for (int v = 0; v < V; ++v) {
        f.variables.push_back({yhat_name(g, v), aux.yhat_card[v]});
        f.factors.push_back({{yhat_name(g, v)}, {x_name(g, v), y_name(g, v), q_name()}, aux.quantizer[v]});
    }
    return f;
}

}  // namespace

JointDistribution induced_joint(const NetworkSpec& net, const AuxSpec& aux) {
    net.validate();
    validate_aux(net, aux);
    return build_factored_joint(joint_factors(net, aux, true, as_discrete(net)));
}

JointDistribution channel_joint(const NetworkSpec& net, const AuxSpec& aux) {
    net.validate();
    validate_aux(net, aux);
    return build_factored_joint(joint_factors(net, aux, false, as_discrete(net)));
}

JointDistribution input_output_joint(const DiscreteChannel& ch, const GroundSet& nodes, const JointDistribution& input) {
    const int V = nodes.size();
    if (static_cast<int>(input.num_vars()) != V) throw InputError("input pmf needs one variable per node");
    Factorization f;
    Factor fx, fy;
    for (int v = 0; v < V; ++v) {
        if (input.vars()[v].card != ch.in_card[v])
            throw InputError("input pmf alphabet of node " + nodes.label(v) + " does not match the channel");
        f.variables.push_back({x_name(nodes, v), ch.in_card[v]});
        fx.children.push_back(x_name(nodes, v));
    }
    fx.table = input.probs();
    for (int v = 0; v < V; ++v) {
        f.variables.push_back({y_name(nodes, v), ch.out_card[v]});
        fy.children.push_back(y_name(nodes, v));
        fy.parents.push_back(x_name(nodes, v));
    }
    fy.table = ch.table;
    f.factors = {std::move(fx), std::move(fy)};
    return build_factored_joint(f);
}

JointDistribution input_output_joint(const NetworkSpec& net, const JointDistribution& input) {
    return input_output_joint(as_discrete(net), net.nodes, input);
}

JointDistribution product_input(const GroundSet& nodes, const std::vector<std::vector<double>>& marginals) {
    const int V = nodes.size();
    if (static_cast<int>(marginals.size()) != V) throw InputError("one input marginal per node required");
    std::vector<Variable> vars;
    std::vector<int> cards;
    for (int v = 0; v < V; ++v) {
        check_pmf(marginals[v], "input marginal of node " + nodes.label(v));
        vars.push_back({x_name(nodes, v), static_cast<int>(marginals[v].size())});
        cards.push_back(vars.back().card);
    }
    std::size_t n = product(cards);
    std::vector<double> p(n);
    std::vector<int> d;
    for (std::size_t i = 0; i < n; ++i) {
        digits_of(i, cards, d);
        double x = 1.0;
        for (int v = 0; v < V; ++v) x *= marginals[v][d[v]];
        p[i] = x;
    }
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= s;
    return JointDistribution(vars, std::move(p));
}

JointDistribution uniform_input(const NetworkSpec& net) {
    std::vector<std::vector<double>> m;
    for (int v = 0; v < net.V(); ++v) {
        int c = input_card(net, v);
        m.emplace_back(c, 1.0 / c);
    }
    return product_input(net.nodes, m);
}

int ff_rank(const std::vector<std::vector<int>>& G, Subset w, int q) {
    if (!is_prime(q)) throw InputError("ff_rank: q must be prime");
    const int V = static_cast<int>(G.size());
    const auto cols = members(w), rows = members(full_set(V) & ~w);
    std::vector<std::vector<long long>> M(rows.size(), std::vector<long long>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) M[i][j] = ((G[rows[i]][cols[j]] % q) + q) % q;
    auto inv = [q](long long a) {
        long long r = 1, e = q - 2;
        for (a %= q; e; e >>= 1, a = a * a % q)
            if (e & 1) r = r * a % q;
        return r;
    };
    int rank = 0;
    for (std::size_t c = 0; c < cols.size() && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && M[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(M[piv], M[rank]);
        long long iv = inv(M[rank][c]);
        for (auto& x : M[rank]) x = x * iv % q;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == static_cast<std::size_t>(rank) || M[r][c] == 0) continue;
            long long f = M[r][c];
            for (std::size_t k = 0; k < cols.size(); ++k) M[r][k] = ((M[r][k] - f * M[rank][k]) % q + q) % q;
        }
        ++rank;
    }
    return rank;
}

int ff_rank(const FFChannel& ch, Subset w) { return ff_rank(ch.G, w, ch.q); }

double sd_expected_cut(const NetworkSpec& net, Subset w, const JointDistribution* input) {
    const auto* sd = std::get_if<SDChannel>(&net.channel);
    if (!sd) throw InputError("sd_expected_cut: not a state-dependent network");
    const Subset wc = net.nodes.full() & ~w;
    double total = 0;
    for (std::size_t s = 0; s < sd->per_state.size(); ++s) {
        if (sd->state_pmf[s] == 0) continue;
        double val;
        if (auto* f = std::get_if<FFChannel>(&sd->per_state[s])) {
            val = ff_rank(*f, w) * std::log2(static_cast<double>(f->q));
        } else {
            if (!input) throw InputError("sd_expected_cut: discrete states need an input pmf");
            auto joint = input_output_joint(std::get<DiscreteChannel>(sd->per_state[s]), net.nodes, *input);
            VarMask ywc = 0, xwc = 0;
            for (int v : members(wc)) {
                ywc |= VarMask{1} << joint.index_of(y_name(net.nodes, v));
                xwc |= VarMask{1} << joint.index_of(x_name(net.nodes, v));
            }
            val = joint.entropy(ywc | xwc) - joint.entropy(xwc);
        }
        total += sd->state_pmf[s] * val;
    }
    return total;
}

SourceEntropy::SourceEntropy(const NetworkSpec& net) : net_(&net), cache_(net.source_dist) {}

VarMask SourceEntropy::vars_of(Subset s) const {
    VarMask m = 0;
    int i = 0;
    for (int v : members(net_->sources)) {
        if (contains_bit(s, v)) m |= VarMask{1} << i;
        ++i;
    }
    return m;
}

double SourceEntropy::H(Subset s, Subset given) const { return cache_.H(vars_of(s), vars_of(given & ~s)); }

}  // namespace swnet
