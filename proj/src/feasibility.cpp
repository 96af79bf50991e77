#include "swnet/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>

#include "swnet/kernels.hpp"

namespace swnet {

std::vector<Subset> nonempty_subsets(Subset s) {
    std::vector<Subset> out;
    for (Subset t = s; t; t = (t - 1) & s) out.push_back(t);
    std::reverse(out.begin(), out.end());
    return out;
}

namespace {

bool verdict(double slack, Strictness st, double tol) { return st == Strictness::strict ? slack > tol : slack >= -tol; }

void add(FeasibilityReport& r, CutReport c) {
    r.feasible = r.feasible && c.feasible;
    if (!c.vacuous) r.min_slack = std::min(r.min_slack, c.slack);
    r.binding.push_back(c);
}

void sort_binding(FeasibilityReport& r) {
    std::stable_sort(r.binding.begin(), r.binding.end(), [](const CutReport& a, const CutReport& b) {
        return a.set != b.set ? a.set < b.set : a.destination < b.destination;
    });
}

}  // namespace

FeasibilityReport evaluate_cuts(const CutProblem& p, const std::string& condition) {
    const Subset full = full_set(p.V);
    FeasibilityReport r;
    r.condition = condition;
    const auto dests = members(p.destinations);
    std::vector<Subset> room(p.V, 0);
    std::vector<std::pair<Subset, int>> cuts;
    std::vector<std::vector<std::size_t>> where(p.V);
    for (int d : dests) {
        room[d] = (p.allowed ? p.allowed(d) : full) & ~(Subset{1} << d);
        where[d].assign(std::size_t{1} << p.V, SIZE_MAX);
        for (Subset w : nonempty_subsets(room[d])) {
            where[d][w] = cuts.size();
            cuts.push_back({w, d});
        }
    }
    auto values = kernels::omp::map_indices(cuts.size(), [&](std::size_t i) { return p.rhs(cuts[i].first, cuts[i].second); });
    for (Subset s : p.sets) {
        if (s == 0) continue;
        bool have_lhs = false;
        double lhs = 0;
        for (int d : dests) {
            if (contains_bit(s, d)) continue;
            if (!is_subset(s, room[d])) throw InputError("cut sweep: set outside the active nodes of a destination");
            if (!have_lhs) {
                lhs = p.lhs(s);
                have_lhs = true;
            }
            CutReport c;
            c.set = s;
            c.destination = d;
            c.rhs = INFINITY;
            const Subset free = room[d] & ~s;
            for (Subset e = 0;; e = (e - free) & free) {  // supersets of s in increasing order
                Subset w = s | e;
                double v = values[where[d][w]];
                if (v < c.rhs) {
                    c.rhs = v;
                    c.cut = w;
                }
                if (e == free) break;
            }
            c.lhs = lhs;
            c.slack = c.rhs - c.lhs;
            c.vacuous = c.lhs <= p.tol;
            c.feasible = c.vacuous || verdict(c.slack, p.strictness, p.tol);
            add(r, c);
        }
    }
    sort_binding(r);
    return r;
}

NetworkVars::NetworkVars(const JointDistribution& joint, const GroundSet& nodes) {
    auto bit = [&](const std::string& n) { return joint.has(n) ? VarMask{1} << joint.index_of(n) : VarMask{0}; };
    q = bit(q_name());
    for (int v = 0; v < nodes.size(); ++v) {
        x.push_back(bit(x_name(nodes, v)));
        y.push_back(bit(y_name(nodes, v)));
        yhat.push_back(bit(yhat_name(nodes, v)));
    }
}

static VarMask gather(const std::vector<VarMask>& m, Subset s) {
    VarMask out = 0;
    for (int v : members(s)) out |= m[v];
    return out;
}

VarMask NetworkVars::X(Subset s) const { return gather(x, s); }
VarMask NetworkVars::Y(Subset s) const { return gather(y, s); }
VarMask NetworkVars::Yhat(Subset s) const { return gather(yhat, s); }

FeasibilityReport cutset_necessary(const NetworkSpec& net, const JointDistribution& input, double tol) {
    net.validate();
    const auto joint = input_output_joint(net, input);
    const EntropyCache H(joint);
    const NetworkVars nv(joint, net.nodes);
    const SourceEntropy src(net);
    const Subset full = net.nodes.full();
    CutProblem p;
    p.V = net.V();
    p.sets = nonempty_subsets(net.sources);
    p.destinations = net.destinations;
    p.lhs = [&](Subset s) { return src.H(s, net.sources & ~s); };
    p.rhs = [&](Subset w, int) {
        const Subset wc = full & ~w;
        return H.I(nv.X(w), nv.Y(wc), nv.X(wc));
    };
    p.tol = tol;
    return evaluate_cuts(p, "cutset");
}

double theorem2_cut_value(const EntropyCache& H, const NetworkVars& nv, Subset active, Subset w, int d) {
    const Subset wc = active & ~w, rest = wc & ~(Subset{1} << d);
    const VarMask obs = nv.y[d] | nv.Yhat(rest);
    return H.I(nv.X(w), obs, nv.X(wc) | nv.q) - H.I(nv.Y(w), nv.Yhat(w), nv.X(active) | obs | nv.q);
}

FeasibilityReport sufficient_theorem2(const NetworkSpec& net, const AuxSpec& aux, double tol) {
    const auto joint = channel_joint(net, aux);
    const EntropyCache H(joint);
    const NetworkVars nv(joint, net.nodes);
    const SourceEntropy src(net);
    const Subset full = net.nodes.full();
    CutProblem p;
    p.V = net.V();
    p.sets = nonempty_subsets(net.sources);
    p.destinations = net.destinations;
    p.lhs = [&](Subset s) { return src.H(s, net.sources & ~s); };
    p.rhs = [&](Subset w, int d) { return theorem2_cut_value(H, nv, full, w, d); };
    p.tol = tol;
    return evaluate_cuts(p, "theorem2");
}

double node_budget(const EntropyCache& H, const NetworkVars& nv, Subset s) {
    double r = 0;
    for (int t : members(s)) r += H.H(nv.x[t], nv.q) + H.H(nv.yhat[t], nv.x[t] | nv.y[t] | nv.q);
    return r;
}

double cut_value_budget_form(const EntropyCache& H, const NetworkVars& nv, Subset w, int d) {
    const Subset full = full_set(static_cast<int>(nv.x.size()));
    return removal_function(H, nv, full, w, d);
}

double cut_value_information_form(const EntropyCache& H, const NetworkVars& nv, Subset w, int d) {
    return theorem2_cut_value(H, nv, full_set(static_cast<int>(nv.x.size())), w, d);
}

double removal_function(const EntropyCache& H, const NetworkVars& nv, Subset active, Subset s, int d) {
    const Subset others = active & ~s;
    const VarMask given = nv.X(others) | nv.Yhat(others & ~(Subset{1} << d)) | nv.y[d] | nv.q;
    return node_budget(H, nv, s) - H.H(nv.Yhat(s) | nv.X(s), given);
}

FeasibilityReport per_partition_sufficient(const NetworkSpec& net, const AuxSpec& aux,
                                           const std::map<int, OrderedPartition>& partitions, double tol) {
    const auto joint = channel_joint(net, aux);
    const EntropyCache H(joint);
    const NetworkVars nv(joint, net.nodes);
    const SourceEntropy src(net);
    const Subset full = net.nodes.full();
    FeasibilityReport r;
    r.condition = "per_partition";
    for (const auto& [d, c] : partitions) {
        if (d < 0 || d >= net.V() || !contains_bit(net.destinations, d))
            throw InputError("per_partition_sufficient: partition given for a non-destination");
        const Subset ground = full & ~(Subset{1} << d);
        validate_partition(c, ground);
        const VarMask side = nv.y[d] | nv.x[d] | nv.q;
        const Subset ud = Subset{1} << d;
        for (Subset s : nonempty_subsets(ground)) {
            double need = 0;
            for (int k = 1; k <= c.size() + 1; ++k) {
                const Subset cur = c.block(k), prev = c.block(k - 1);
                const Subset before = c.before(k), before_prev = c.before(k - 1);
                need += src.H(s & cur, (cur & ~s) | before | ud);
                need += H.H(nv.X(s & cur) | nv.Yhat(s & prev),
                            nv.X(cur & ~s) | nv.Yhat(prev & ~s) | nv.X(before) | nv.Yhat(before_prev) | side);
            }
            CutReport cr;
            cr.set = s;
            cr.destination = d;
            cr.cut = s;
            cr.lhs = need;
            cr.rhs = node_budget(H, nv, s);
            cr.slack = cr.rhs - cr.lhs;
            cr.feasible = verdict(cr.slack, Strictness::non_strict, tol);
            add(r, cr);
        }
    }
    sort_binding(r);
    return r;
}

FeasibilityReport unified_sufficient(const NetworkSpec& net, const AuxSpec& aux, double tol) {
    const auto joint = channel_joint(net, aux);
    const EntropyCache H(joint);
    const NetworkVars nv(joint, net.nodes);
    const SourceEntropy src(net);
    const Subset full = net.nodes.full();
    FeasibilityReport r;
    r.condition = "unified";
    for (int d : members(net.destinations)) {
        const Subset ground = full & ~(Subset{1} << d);
        const VarMask side = nv.y[d] | nv.x[d] | nv.q;
        for (Subset s : nonempty_subsets(ground)) {
            const Subset sc = ground & ~s;
            CutReport cr;
            cr.set = s;
            cr.destination = d;
            cr.cut = s;
            cr.lhs = H.H(nv.Yhat(s) | nv.X(s), nv.X(sc) | nv.Yhat(sc) | side) + src.H(s, full & ~s);
            cr.rhs = node_budget(H, nv, s);
            cr.slack = cr.rhs - cr.lhs;
            cr.feasible = verdict(cr.slack, Strictness::non_strict, tol);
            add(r, cr);
        }
    }
    sort_binding(r);
    return r;
}

namespace {

Subset removal_step(const EntropyCache& H, const NetworkVars& nv, Subset active, Subset candidates, int d, double tol) {
    Subset best = 0;
    double best_val = -tol;
    for (Subset t : nonempty_subsets(candidates)) {
        double v = removal_function(H, nv, active, t, d);
        if (v < best_val) {
            best_val = v;
            best = t;
        }
    }
    return best;
}

RemovalResult run_removal(const NetworkSpec& net, const EntropyCache& H, const NetworkVars& nv, int d, double tol) {
    RemovalResult r;
    r.kept = net.nodes.full();
    const Subset dbit = Subset{1} << d;
    for (;;) {
        const Subset cand = r.kept & ~net.sources & ~dbit;
        const Subset t = removal_step(H, nv, r.kept, cand, d, tol);
        if (!t) break;
        const double ht = removal_function(H, nv, r.kept, t, d);
        for (Subset w : nonempty_subsets(r.kept & ~dbit & ~t))
            if (removal_function(H, nv, r.kept, w | t, d) > removal_function(H, nv, r.kept, w, d) + ht + tol)
                r.monotone = false;
        r.steps.push_back(t);
        r.removed |= t;
        r.kept &= ~t;
    }
    return r;
}

}  // namespace

RemovalResult remove_additional_constraints(const NetworkSpec& net, const AuxSpec& aux, int d, double tol) {
    if (d < 0 || d >= net.V() || !contains_bit(net.destinations, d))
        throw InputError("remove_additional_constraints: not a destination");
    const auto joint = channel_joint(net, aux);
    const EntropyCache H(joint);
    const NetworkVars nv(joint, net.nodes);
    return run_removal(net, H, nv, d, tol);
}

FeasibilityReport sufficient_theorem2_reduced(const NetworkSpec& net, const AuxSpec& aux, double tol) {
    const auto joint = channel_joint(net, aux);
    const EntropyCache H(joint);
    const NetworkVars nv(joint, net.nodes);
    const SourceEntropy src(net);
    std::map<int, Subset> active;
    for (int d : members(net.destinations)) active[d] = run_removal(net, H, nv, d, tol).kept;
    CutProblem p;
    p.V = net.V();
    p.sets = nonempty_subsets(net.sources);
    p.destinations = net.destinations;
    p.allowed = [&](int d) { return active.at(d); };
    p.lhs = [&](Subset s) { return src.H(s, net.sources & ~s); };
    p.rhs = [&](Subset w, int d) { return theorem2_cut_value(H, nv, active.at(d), w, d); };
    p.tol = tol;
    auto r = evaluate_cuts(p, "theorem2_reduced");
    for (auto& [d, z] : active)
        if (z != net.nodes.full()) r.removed[d] = net.nodes.full() & ~z;
    return r;
}

SpecialKind parse_special_kind(const std::string& s) {
    if (s == "semi-det") return SpecialKind::semi_deterministic;
    if (s == "det") return SpecialKind::deterministic;
    if (s == "aref") return SpecialKind::aref;
    if (s == "semi-aref") return SpecialKind::semi_aref;
    if (s == "ff") return SpecialKind::finite_field;
    if (s == "sd") return SpecialKind::state_dependent;
    throw InputError("unknown network kind " + s);
}

std::string to_string(SpecialKind k) {
    switch (k) {
        case SpecialKind::semi_deterministic: return "semi-det";
        case SpecialKind::deterministic: return "det";
        case SpecialKind::aref: return "aref";
        case SpecialKind::semi_aref: return "semi-aref";
        case SpecialKind::finite_field: return "ff";
        case SpecialKind::state_dependent: return "sd";
    }
    return "?";
}

bool is_product_input(const JointDistribution& input, double tol) {
    const std::size_t n = input.num_vars();
    std::vector<std::vector<double>> marg;
    for (std::size_t i = 0; i < n; ++i) marg.push_back(input.marginal(VarMask{1} << i));
    for (std::size_t cell = 0; cell < input.size(); ++cell) {
        double p = 1.0;
        for (std::size_t i = 0; i < n; ++i) p *= marg[i][(cell / input.stride(i)) % input.vars()[i].card];
        if (std::abs(p - input.probs()[cell]) > tol) return false;
    }
    return true;
}

namespace {

bool rows_deterministic(const std::vector<double>& table, std::size_t cols) {
    for (std::size_t r = 0; r * cols < table.size(); ++r) {
        int ones = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            double p = table[r * cols + c];
            if (p == 1.0) ++ones;
            else if (p != 0.0) return false;
        }
        if (ones != 1) return false;
    }
    return true;
}

// Y_v for v != d is a function of (X_V, Y_d) wherever p(y|x) > 0.
bool semi_deterministic(const DiscreteChannel& ch, int d) {
    const std::size_t cols = [&] {
        std::size_t c = 1;
        for (int k : ch.out_card) c *= k;
        return c;
    }();
    std::size_t stride_d = 1;
    for (int v = 0; v < d; ++v) stride_d *= ch.out_card[v];
    const std::size_t rows = ch.table.size() / cols;
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<long long> seen(ch.out_card[d], -1);
        for (std::size_t c = 0; c < cols; ++c) {
            if (ch.table[r * cols + c] <= 0) continue;
            const int yd = static_cast<int>((c / stride_d) % ch.out_card[d]);
            const long long others = static_cast<long long>(c - yd * stride_d);
            if (seen[yd] >= 0 && seen[yd] != others) return false;
            seen[yd] = others;
        }
    }
    return true;
}

// I(X_v; (Y_{v,u})_{u in targets}) with conditionally independent components.
double component_information(const ArefChannel& ch, int v, Subset targets, const std::vector<double>& px) {
    std::vector<const ArefComponent*> comps;
    for (const auto& c : ch.components)
        if (c.from == v && contains_bit(targets, c.to)) comps.push_back(&c);
    std::size_t cells = 1;
    for (auto* c : comps) cells *= c->card;
    std::vector<double> py(cells, 0.0);
    double h_given = 0;
    for (int x = 0; x < ch.in_card[v]; ++x) {
        if (px[x] <= 0) continue;
        for (std::size_t t = 0; t < cells; ++t) {
            double p = 1.0;
            std::size_t rest = t;
            for (auto* c : comps) {
                p *= c->table[x * c->card + rest % c->card];
                rest /= c->card;
            }
            py[t] += px[x] * p;
        }
        for (auto* c : comps) {
            std::vector<double> row(c->table.begin() + x * c->card, c->table.begin() + (x + 1) * c->card);
            h_given += px[x] * entropy_of(row);
        }
    }
    return entropy_of(py) - h_given;
}

}  // namespace

FeasibilityReport specialized_condition(const NetworkSpec& net, SpecialKind kind, const JointDistribution* input,
                                        double tol) {
    net.validate();
    const Subset full = net.nodes.full();
    const SourceEntropy src(net);
    CutProblem p;
    p.V = net.V();
    p.sets = nonempty_subsets(net.sources);
    p.destinations = net.destinations;
    p.lhs = [&](Subset s) { return src.H(s, net.sources & ~s); };
    p.tol = tol;

    auto need_product_input = [&] {
        if (!input) throw InputError(to_string(kind) + " condition needs an input pmf");
        if (!is_product_input(*input)) throw InputError(to_string(kind) + " condition needs a product input pmf");
    };
    auto mismatch = [&](const std::string& why) { return InputError("network is not " + to_string(kind) + ": " + why); };

    std::unique_ptr<JointDistribution> joint;
    std::unique_ptr<EntropyCache> H;
    std::unique_ptr<NetworkVars> nv;
    auto build_joint = [&] {
        joint = std::make_unique<JointDistribution>(input_output_joint(net, *input));
        H = std::make_unique<EntropyCache>(*joint);
        nv = std::make_unique<NetworkVars>(*joint, net.nodes);
    };

    switch (kind) {
        case SpecialKind::semi_deterministic: {
            if (popcount(net.destinations) != 1) throw mismatch("needs a single destination");
            if (!std::holds_alternative<DiscreteChannel>(net.channel)) throw mismatch("needs a discrete channel");
            const int d = std::countr_zero(net.destinations);
            if (!semi_deterministic(std::get<DiscreteChannel>(net.channel), d))
                throw mismatch("outputs are not functions of the inputs and the destination output");
            need_product_input();
            build_joint();
            p.rhs = [&](Subset w, int) {
                const Subset wc = full & ~w;
                return H->I(nv->X(w), nv->Y(wc), nv->X(wc));
            };
            break;
        }
        case SpecialKind::deterministic: {
            if (std::holds_alternative<GaussianChannel>(net.channel) || std::holds_alternative<SDChannel>(net.channel))
                throw mismatch("needs a single-state discrete channel");
            auto ch = as_discrete(net);
            std::size_t cols = 1;
            for (int c : ch.out_card) cols *= c;
            if (!rows_deterministic(ch.table, cols)) throw mismatch("channel rows are not deterministic");
            need_product_input();
            build_joint();
            p.rhs = [&](Subset w, int) {
                const Subset wc = full & ~w;
                return H->H(nv->Y(wc), nv->X(wc));
            };
            break;
        }
        case SpecialKind::aref:
        case SpecialKind::semi_aref: {
            const auto* ch = std::get_if<ArefChannel>(&net.channel);
            if (!ch) throw mismatch("needs an aref channel");
            for (const auto& c : ch->components) {
                bool stochastic_ok = kind == SpecialKind::semi_aref && contains_bit(net.destinations, c.to);
                if (!stochastic_ok && !rows_deterministic(c.table, c.card))
                    throw mismatch("component " + net.nodes.label(c.from) + "->" + net.nodes.label(c.to) +
                                   " is not deterministic");
            }
            if (kind == SpecialKind::semi_aref && popcount(net.destinations) != 1)
                throw mismatch("needs a single destination");
            need_product_input();
            auto marg = std::make_shared<std::vector<std::vector<double>>>();
            for (int v = 0; v < net.V(); ++v) marg->push_back(input->marginal(VarMask{1} << v));
            p.rhs = [ch, marg, full](Subset w, int) {
                double s = 0;
                for (int v : members(w)) s += component_information(*ch, v, full & ~w, (*marg)[v]);
                return s;
            };
            break;
        }
        case SpecialKind::finite_field: {
            const auto* ch = std::get_if<FFChannel>(&net.channel);
            if (!ch) throw mismatch("needs a finite-field channel");
            p.rhs = [ch](Subset w, int) { return ff_rank(*ch, w) * std::log2(static_cast<double>(ch->q)); };
            break;
        }
        case SpecialKind::state_dependent: {
            const auto* ch = std::get_if<SDChannel>(&net.channel);
            if (!ch) throw mismatch("needs a state-dependent channel");
            bool any_discrete = std::any_of(ch->per_state.begin(), ch->per_state.end(),
                                            [](const auto& s) { return std::holds_alternative<DiscreteChannel>(s); });
            if (any_discrete) {
                need_product_input();
                for (const auto& s : ch->per_state)
                    if (auto* dc = std::get_if<DiscreteChannel>(&s)) {
                        std::size_t cols = 1;
                        for (int c : dc->out_card) cols *= c;
                        if (!rows_deterministic(dc->table, cols)) throw mismatch("a state channel is not deterministic");
                    }
            }
            p.rhs = [&net, input](Subset w, int) { return sd_expected_cut(net, w, input); };
            break;
        }
    }
    return evaluate_cuts(p, to_string(kind));
}

FeasibilityReport achievable_rate_region(const NetworkSpec& net, const AuxSpec& aux, const std::vector<double>& rates,
                                         double tol) {
    if (static_cast<int>(rates.size()) != net.V()) throw InputError("one rate per node required");
    for (double r : rates)
        if (!(r >= 0)) throw InputError("rates must be nonnegative");
    const auto joint = channel_joint(net, aux);
    const EntropyCache H(joint);
    const NetworkVars nv(joint, net.nodes);
    const Subset full = net.nodes.full();
    auto sums = subset_sums(rates);
    CutProblem p;
    p.V = net.V();
    // Sets carrying no rate impose nothing.
    for (Subset s : nonempty_subsets(full))
        if (sums[s] > 0) p.sets.push_back(s);
    p.destinations = net.destinations;
    p.lhs = [&](Subset s) { return sums[s]; };
    p.rhs = [&](Subset w, int d) { return std::max(0.0, theorem2_cut_value(H, nv, full, w, d)); };
    p.tol = tol;
    return evaluate_cuts(p, "rate_region");
}

}  // namespace swnet
