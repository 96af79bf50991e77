#include "swnet/verify.hpp"

#include <cmath>
#include <sstream>

namespace swnet {

namespace {

std::vector<double> random_rows(std::size_t rows, std::size_t cols, Rng& rng) {
    std::vector<double> t;
    t.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = rng.dirichlet(cols);
        t.insert(t.end(), row.begin(), row.end());
    }
    return t;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

}  // namespace

JointDistribution random_two_component_joint(int n, Rng& rng, int card) {
    std::vector<Variable> vars;
    std::size_t cells = 1;
    for (int i = 1; i <= n; ++i) vars.push_back({"X" + std::to_string(i), card});
    for (int i = 1; i <= n; ++i) vars.push_back({"Y" + std::to_string(i), card});
    for (const auto& v : vars) cells *= v.card;
    return JointDistribution(vars, rng.dirichlet(cells));
}

MlswContext two_component_context(const JointDistribution& joint, int n) {
    std::vector<VarMask> xs, ys;
    for (int i = 1; i <= n; ++i) {
        xs.push_back(joint.mask_of({"X" + std::to_string(i)}));
        ys.push_back(joint.mask_of({"Y" + std::to_string(i)}));
    }
    return MlswContext(joint, GroundSet::numbered(n), xs, ys, 0);
}

SetFunction random_submodular(int n, Rng& rng) {
    std::vector<Variable> vars;
    for (int i = 0; i < n; ++i) vars.push_back({"V" + std::to_string(i), 2});
    JointDistribution joint(vars, rng.dirichlet(std::size_t{1} << n, 0.5));
    std::vector<VarMask> groups;
    for (int i = 0; i < n; ++i) groups.push_back(VarMask{1} << i);
    SetFunction h = entropy_set_function(joint, GroundSet::numbered(n), groups, 0);
    std::vector<double> w(n), m(n);
    for (int i = 0; i < n; ++i) {
        w[i] = rng.uniform(0.0, 2.0);
        m[i] = rng.uniform(-1.0, 1.0);
    }
    std::vector<double> vals(std::size_t{1} << n);
    for (Subset s = 0; s < vals.size(); ++s) {
        double ws = 0, ms = 0;
        for (int i : members(s)) {
            ws += w[i];
            ms += m[i];
        }
        vals[s] = h(s) + std::sqrt(ws) + ms;
    }
    return SetFunction(h.ground(), std::move(vals));
}

SetFunction random_integer_submodular(int n, Rng& rng) {
    const int terms = 1 + rng.below(4);
    std::vector<Subset> groups(terms);
    std::vector<int> caps(terms), modular(n);
    for (int j = 0; j < terms; ++j) {
        groups[j] = static_cast<Subset>(1 + rng.below(static_cast<int>(full_set(n))));
        caps[j] = 1 + rng.below(popcount(groups[j]));
    }
    for (int i = 0; i < n; ++i) modular[i] = rng.below(7) - 3;
    std::vector<double> vals(std::size_t{1} << n);
    for (Subset s = 0; s < vals.size(); ++s) {
        long long v = 0;
        for (int j = 0; j < terms; ++j) v += std::min(caps[j], popcount(s & groups[j])) * (1 + j);
        for (int i : members(s)) v += modular[i];
        vals[s] = static_cast<double>(v);
    }
    return SetFunction(GroundSet::numbered(n), std::move(vals));
}

NetworkSpec random_discrete_network(int V, Subset sources, Subset destinations, Rng& rng) {
    NetworkSpec net;
    net.nodes = GroundSet::numbered(V);
    net.sources = sources;
    net.destinations = destinations;
    std::vector<Variable> uvars;
    for (int v : members(sources)) uvars.push_back({u_name(net.nodes, v), 2});
    net.source_dist = JointDistribution(uvars, rng.dirichlet(std::size_t{1} << uvars.size()));
    DiscreteChannel ch;
    ch.in_card.assign(V, 2);
    ch.out_card.assign(V, 2);
    ch.table = random_rows(std::size_t{1} << V, std::size_t{1} << V, rng);
    net.channel = ch;
    net.validate();
    return net;
}

AuxSpec random_aux(const NetworkSpec& net, Rng& rng, int q_card, int yhat_card) {
    AuxSpec aux;
    aux.q_pmf = rng.dirichlet(q_card);
    for (int v = 0; v < net.V(); ++v) {
        const int nx = input_card(net, v), ny = output_card(net, v);
        aux.input.push_back(random_rows(q_card, nx, rng));
        aux.yhat_card.push_back(yhat_card);
        aux.quantizer.push_back(random_rows(static_cast<std::size_t>(nx) * ny * q_card, yhat_card, rng));
    }
    validate_aux(net, aux);
    return aux;
}

NetworkSpec random_ff_network(int V, int q, Rng& rng) {
    NetworkSpec net;
    net.nodes = GroundSet::numbered(V);
    net.sources = 1;
    net.destinations = Subset{1} << (V - 1);
    net.source_dist = JointDistribution({{u_name(net.nodes, 0), 2}}, {0.5, 0.5});
    FFChannel ch;
    ch.q = q;
    ch.G.assign(V, std::vector<int>(V, 0));
    for (int r = 0; r < V; ++r)
        for (int c = 0; c < V; ++c)
            if (r != c) ch.G[r][c] = rng.below(q);
    net.channel = ch;
    net.validate();
    return net;
}

NetworkSpec random_gaussian_network(int V, Rng& rng) {
    NetworkSpec net;
    net.nodes = GroundSet::numbered(V);
    net.sources = 1;
    net.destinations = Subset{1} << (V - 1);
    net.source_dist = JointDistribution({{u_name(net.nodes, 0), 2}}, {0.5, 0.5});
    GaussianChannel ch;
    ch.noise.assign(V, 1.0);
    ch.gain.assign(V, std::vector<std::complex<double>>(V));
    const double s = std::sqrt(0.5);
    for (int a = 0; a < V; ++a)
        for (int b = 0; b < V; ++b)
            if (a != b) ch.gain[a][b] = {s * rng.normal(), s * rng.normal()};
    net.channel = ch;
    net.validate();
    return net;
}

std::size_t VerifyReport::failures() const {
    std::size_t f = 0;
    for (const auto& r : results) f += !r.pass;
    return f;
}

namespace {

VerifyReport start(const std::string& kind, int V, int trials, int samples, std::uint64_t seed, int max_ground) {
    if (V < 1 || V > max_ground)
        throw CapError("verify " + kind + ": ground size must be in [1, " + std::to_string(max_ground) + "]");
    if (trials < 1 || samples < 1) throw InputError("verify: trials and samples must be positive");
    VerifyReport r;
    r.kind = kind;
    r.ground = V;
    r.trials = trials;
    r.samples = samples;
    r.seed = seed;
    return r;
}

}  // namespace

VerifyReport verify_identity(int V, int trials, int samples, std::uint64_t seed, double tol) {
    auto rep = start("identity", V, trials, samples, seed, 5);
    const Rng root(seed);
    for (int t = 0; t < trials; ++t) {
        Rng rng = root.fork(t);
        auto joint = random_two_component_joint(V, rng);
        auto ctx = two_component_context(joint, V);
        auto r = verify_sw_identity(ctx, samples, seed + t, tol);
        std::string detail = std::to_string(r.partitions.size()) + " partitions, " +
                             std::to_string(r.covering.samples_tested) + " polytope samples, " +
                             std::to_string(r.rate_points) + " rate points";
        if (!r.pass())
            detail += "; uncovered " + std::to_string(r.covering.uncovered_count) + ", vertex failures " +
                      std::to_string(r.covering.containment_failure_count) + ", rate points uncovered " +
                      std::to_string(r.rate_points_uncovered);
        rep.results.push_back({static_cast<std::size_t>(t), r.pass(), detail});
    }
    return rep;
}

VerifyReport verify_lemma2(int V, int trials, int samples, std::uint64_t seed, double tol) {
    auto rep = start("lemma2", V, trials, samples, seed, 10);
    if (V < 2) throw InputError("verify lemma2: ground size must be at least 2");
    const Rng root(seed);
    for (int t = 0; t < trials; ++t) {
        Rng rng = root.fork(t);
        const SetFunction f = random_submodular(V, rng);
        const BasePolytope P(f);
        const Subset full = f.ground().full();
        std::size_t bad = 0, checked = 0;
        double identity_err = 0;
        for (Subset cut = 1; cut < full; ++cut) {
            const Subset tc = full & ~cut;
            auto fd = facet_decompose(f, cut);
            if (!is_submodular(fd.inner, tol) || !is_submodular(fd.outer, tol)) {
                ++bad;
                continue;
            }
            const BasePolytope Pi(fd.inner, tol), Po(fd.outer, tol);
            const Subset tl = fd.inner.ground().full();
            for (Subset s = tl;; s = (s - 1) & tl) {
                const Subset sg = deposit_bits(s, cut);
                identity_err = std::max(identity_err, std::abs(conditional_value(fd.inner, s, tl & ~s) -
                                                               conditional_value(f, sg, full & ~sg)));
                if (s == 0) break;
            }
            // facet -> product
            for (const auto& x : sample_points(P, samples, seed + 0x9e37ULL * cut + t, SampleMode::on_facet(cut))) {
                ++checked;
                bad += !contains(Pi, restrict_point(x, cut), tol) || !contains(Po, restrict_point(x, tc), tol);
            }
            // product -> facet
            auto a = sample_points(Pi, samples, seed + 0x7f4aULL * cut + t);
            auto b = sample_points(Po, samples, seed + 0x7f4bULL * cut + t);
            for (int i = 0; i < samples; ++i) {
                ++checked;
                auto x = combine_points(a[i], cut, b[i], V);
                bad += !contains(P, x, tol) || !on_facet(P, cut, x, tol);
            }
        }
        const bool ok = bad == 0 && identity_err <= 1e-12;
        rep.results.push_back({static_cast<std::size_t>(t), ok,
                               std::to_string(checked) + " samples, " + std::to_string(bad) +
                                   " failures, identity error " + fmt(identity_err)});
    }
    return rep;
}

VerifyReport verify_lemma3(int V, int trials, int samples, std::uint64_t seed, double tol) {
    auto rep = start("lemma3", V, trials, samples, seed, 8);
    const Rng root(seed);
    for (int t = 0; t < trials; ++t) {
        Rng rng = root.fork(t);
        auto f1 = random_integer_submodular(V, rng), f2 = random_integer_submodular(V, rng);
        auto r = minkowski_check(f1, f2, samples, seed + t, 0.0, tol);
        rep.results.push_back({static_cast<std::size_t>(t), r.pass(),
                               std::to_string(r.permutations) + " permutations, " +
                                   std::to_string(r.vertex_mismatches) + " vertex mismatches, " +
                                   std::to_string(r.samples_outside) + "/" + std::to_string(r.samples) +
                                   " sum samples outside"});
    }
    return rep;
}

VerifyReport verify_claim3(int V, int trials, int samples, std::uint64_t seed, double tol) {
    auto rep = start("claim3", V, trials, samples, seed, 4);
    if (V < 2) throw InputError("verify claim3: ground size must be at least 2");
    const Rng root(seed);
    const GroundSet g = GroundSet::numbered(V);
    const auto partitions = ordered_partitions(g.full());
    for (int t = 0; t < trials; ++t) {
        Rng rng = root.fork(t);
        auto joint = random_two_component_joint(V, rng);
        auto ctx = two_component_context(joint, V);
        std::size_t checked = 0, failures = 0;
        double err = 0;
        for (std::size_t ci = 0; ci < partitions.size(); ++ci) {
            const auto& c = partitions[ci];
            for (Subset cut = 1; cut < g.full(); ++cut) {
                if (is_suffix_union(c, cut)) {
                    if (t == 0)
                        rep.skipped.push_back({static_cast<std::size_t>(t), c.format(g), g.format(cut),
                                               "cut is a union of trailing blocks; its facet lies on the region boundary"});
                    continue;
                }
                auto r = check_conjugate_facets(ctx, c, cut, samples, seed + 131 * ci + cut + t, tol);
                ++checked;
                failures += r.failures;
                err = std::max(err, r.max_identity_error);
            }
        }
        const bool ok = failures == 0 && err <= tol;
        rep.results.push_back({static_cast<std::size_t>(t), ok,
                               std::to_string(checked) + " (partition, cut) pairs, " + std::to_string(failures) +
                                   " facet failures, identity error " + fmt(err)});
    }
    return rep;
}

}  // namespace swnet
