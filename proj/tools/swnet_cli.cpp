#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "swnet/feasibility.hpp"
#include "swnet/gaussian.hpp"
#include "swnet/specio.hpp"
#include "swnet/verify.hpp"

using namespace swnet;

namespace {

constexpr int kExitOk = 0, kExitFail = 1, kExitError = 2;

struct Common {
    std::string out;
    bool timing = false;
    double tol = kDefaultTol;
};

struct Outcome {
    OJson report;
    int code = kExitOk;
};

// Consistency failure inside a command (not a user error, not a verdict).
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

OJson params(double tol, std::optional<std::uint64_t> seed = {}, std::optional<int> samples = {}) {
    OJson p;
    p["tol"] = tol;
    p["seed"] = seed ? OJson(*seed) : OJson(nullptr);
    p["samples"] = samples ? OJson(*samples) : OJson(nullptr);
    return p;
}

OJson head(const std::string& command, const std::string& verdict) {
    OJson j;
    j["command"] = command;
    j["verdict"] = verdict;
    return j;
}

void attach(OJson& j, const FeasibilityReport& r, const GroundSet& g) {
    j["condition"] = r.condition;
    j["min_slack"] = r.min_slack;
    OJson b = OJson::array();
    for (const auto& c : r.binding) b.push_back(to_json(c, g));
    j["binding_constraints"] = b;
}

const char* verdict_of(bool feasible) { return feasible ? "feasible" : "infeasible"; }

JointDistribution load_input(const std::string& arg, const NetworkSpec& net) {
    if (arg == "uniform") return uniform_input(net);
    std::ifstream in(arg);
    if (!in) throw InputError("cannot open input pmf " + arg);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SpecError("", std::string("malformed input pmf JSON: ") + e.what());
    }
    return parse_input(j, net, "");
}

Outcome cmd_cutset(const std::string& spec_path, const std::string& input_arg, const Common& c) {
    auto sf = load_spec(spec_path);
    if (sf.net.is_gaussian()) throw InputError("cutset: gaussian networks are handled by the gauss command");
    JointDistribution input;
    if (!input_arg.empty())
        input = load_input(input_arg, sf.net);
    else if (sf.input)
        input = *sf.input;
    else
        throw SpecError("/input", "an input pmf is required (spec key or --input)");
    auto r = cutset_necessary(sf.net, input, c.tol);
    Outcome o{head("cutset", verdict_of(r.feasible)), r.feasible ? kExitOk : kExitFail};
    attach(o.report, r, sf.net.nodes);
    o.report["parameters"] = params(c.tol);
    return o;
}

Outcome cmd_feasible(const std::string& spec_path, bool reduce, const std::string& special,
                     const std::string& input_arg, const Common& c) {
    auto sf = load_spec(spec_path);
    const auto& g = sf.net.nodes;
    FeasibilityReport r;
    if (!special.empty()) {
        std::optional<JointDistribution> input = sf.input;
        if (!input_arg.empty()) input = load_input(input_arg, sf.net);
        r = specialized_condition(sf.net, parse_special_kind(special), input ? &*input : nullptr, c.tol);
    } else {
        if (sf.net.is_gaussian()) throw InputError("feasible: gaussian networks are handled by the gauss command");
        if (!sf.aux) throw SpecError("/aux", "auxiliary tables are required");
        r = reduce ? sufficient_theorem2_reduced(sf.net, *sf.aux, c.tol) : sufficient_theorem2(sf.net, *sf.aux, c.tol);
    }
    Outcome o{head("feasible", verdict_of(r.feasible)), r.feasible ? kExitOk : kExitFail};
    attach(o.report, r, g);
    OJson removed = OJson::object();
    for (const auto& [d, s] : r.removed) {
        OJson list = OJson::array();
        for (int v : members(s)) list.push_back(g.label(v));
        removed[g.label(d)] = list;
    }
    o.report["removed_nodes"] = removed;
    OJson p = params(c.tol);
    p["reduce"] = reduce;
    p["special"] = special.empty() ? OJson(nullptr) : OJson(special);
    o.report["parameters"] = p;
    return o;
}

Outcome cmd_verify(const std::string& kind, int ground, int trials, int samples, std::uint64_t seed, const Common& c) {
    VerifyReport r;
    if (kind == "identity")
        r = verify_identity(ground, trials, samples, seed, c.tol);
    else if (kind == "lemma2")
        r = verify_lemma2(ground, trials, samples, seed, c.tol);
    else if (kind == "lemma3")
        r = verify_lemma3(ground, trials, samples, seed, c.tol);
    else
        r = verify_claim3(ground, trials, samples, seed, c.tol);
    Outcome o{head("verify " + kind, r.pass() ? "pass" : "fail"), r.pass() ? kExitOk : kExitFail};
    o.report["ground"] = ground;
    o.report["trials"] = trials;
    o.report["failures"] = r.failures();
    OJson res = OJson::array();
    for (const auto& t : r.results) {
        OJson e;
        e["trial"] = t.trial;
        e["pass"] = t.pass;
        e["detail"] = t.detail;
        res.push_back(e);
    }
    o.report["results"] = res;
    OJson sk = OJson::array();
    for (const auto& s : r.skipped) {
        OJson e;
        e["partition"] = s.partition;
        e["cut"] = s.cut;
        e["reason"] = s.reason;
        sk.push_back(e);
    }
    o.report["skipped"] = sk;
    o.report["binding_constraints"] = OJson::array();
    o.report["parameters"] = params(c.tol, seed, samples);
    return o;
}

Outcome cmd_gauss(const std::string& mode, const std::string& spec_path, std::vector<double> rates, const Common& c) {
    auto sf = load_spec(spec_path);
    if (!sf.net.is_gaussian()) throw InputError("gauss: channel kind must be gaussian");
    const auto& g = sf.net.nodes;
    GaussianReport r;
    if (mode == "region") {
        if (rates.empty()) {
            if (!sf.rates) throw SpecError("/rates", "rates are required (spec key or --rates)");
            rates = *sf.rates;
        }
        r = gaussian_rate_region(sf.net, rates, c.tol);
    } else {
        r = gaussian_feasibility(sf.net, c.tol);
    }
    Outcome o{head("gauss " + mode, r.verdict), r.exit_code()};
    attach(o.report, r.inner, g);
    OJson bounds;
    bounds["inner"] = to_json(r.inner, g);
    bounds["constant_gap"] = to_json(r.constant_gap, g);
    bounds["outer"] = to_json(r.outer, g);
    o.report["bounds"] = bounds;
    OJson cuts = OJson::array();
    for (const auto& cut : r.cuts) cuts.push_back(to_json(cut, g));
    o.report["cuts"] = cuts;
    OJson p = params(c.tol);
    if (mode == "region") p["rates"] = rates;
    o.report["parameters"] = p;
    return o;
}

Outcome cmd_ffd(const std::string& spec_path, const std::string& dist, bool crosscheck, const Common& c) {
    auto sf = load_spec(spec_path);
    const auto* ff = std::get_if<FFChannel>(&sf.net.channel);
    if (!ff) throw InputError("ffd: channel kind must be ff");
    const auto& g = sf.net.nodes;
    const JointDistribution input = load_input(dist, sf.net);
    auto r = specialized_condition(sf.net, SpecialKind::finite_field, &input, c.tol);

    OJson cuts = OJson::array();
    const Subset full = g.full();
    std::optional<JointDistribution> joint;
    if (crosscheck) joint = input_output_joint(ff_to_discrete(sf.net), input);
    std::optional<EntropyCache> H;
    std::optional<NetworkVars> nv;
    if (joint) {
        H.emplace(*joint);
        nv.emplace(*joint, g);
    }
    double worst = 0;
    for (Subset w = 1; w < full; ++w) {
        OJson e;
        const int rank = ff_rank(*ff, w);
        const double value = rank * std::log2(static_cast<double>(ff->q));
        e["cut"] = g.format(w);
        e["rank"] = rank;
        e["value"] = value;
        if (H) {
            const Subset wc = full & ~w;
            const double h = H->H(nv->Y(wc), nv->X(wc));
            e["entropy"] = h;
            worst = std::max(worst, std::abs(h - value));
        }
        cuts.push_back(e);
    }
    if (crosscheck && worst > c.tol)
        throw InternalError("ffd crosscheck: entropy and rank values differ by " + std::to_string(worst));
    Outcome o{head("ffd", verdict_of(r.feasible)), r.feasible ? kExitOk : kExitFail};
    attach(o.report, r, g);
    o.report["cuts"] = cuts;
    OJson p = params(c.tol);
    p["dist"] = dist;
    p["crosscheck"] = crosscheck;
    o.report["parameters"] = p;
    return o;
}

int emit(Outcome o, const Common& c, double seconds) {
    if (c.timing) {
        OJson t;
        t["seconds"] = seconds;
        o.report["timing"] = t;
    } else {
        o.report["timing"] = nullptr;
    }
    const std::string text = dump_json(o.report);
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << c.out << "\n";
            return kExitError;
        }
        f << text;
    }
    return o.code;
}

void apply_thread_cap() {
    if (const char* env = std::getenv("SWNET_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) omp_set_num_threads(static_cast<int>(n));
    }
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"Feasibility regions for multicasting correlated sources over relay networks"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--out", common.out, "Write the report here instead of stdout");
        s->add_flag("--timing", common.timing, "Include wall-clock timing in the report");
        s->add_option("--tol", common.tol, "Numeric tolerance")->check(CLI::NonNegativeNumber);
    };

    std::string spec, input, special, mode, dist = "uniform", kind;
    bool reduce = false, crosscheck = false;
    int ground = 3, trials = 10, samples = 200;
    std::uint64_t seed = 1;
    std::vector<double> rates;

    auto* cutset = app.add_subcommand("cutset", "Cut-set necessary condition at an input pmf");
    cutset->add_option("spec", spec, "Network spec (JSON)")->required();
    cutset->add_option("--input", input, "Input pmf file or 'uniform'");
    add_common(cutset);

    auto* feasible = app.add_subcommand("feasible", "Compress-and-forward sufficient condition");
    feasible->add_option("spec", spec, "Network spec with aux tables (JSON)")->required();
    feasible->add_flag("--reduce", reduce, "Drop relays whose constraints only hurt");
    feasible->add_option("--special", special, "Specialized network condition")
        ->check(CLI::IsMember({"semi-det", "det", "aref", "semi-aref", "ff", "sd"}));
    feasible->add_option("--input", input, "Input pmf for --special (file or 'uniform')");
    add_common(feasible);

    auto* verify = app.add_subcommand("verify", "Randomized verification of the region identities");
    verify->add_option("kind", kind, "identity | lemma2 | lemma3 | claim3")
        ->required()
        ->check(CLI::IsMember({"identity", "lemma2", "lemma3", "claim3"}));
    verify->add_option("--ground", ground, "Ground set size");
    verify->add_option("--trials", trials, "Random instances");
    verify->add_option("--samples", samples, "Samples per polytope or facet");
    verify->add_option("--seed", seed, "Seed");
    add_common(verify);

    auto* gauss = app.add_subcommand("gauss", "Gaussian network bounds");
    gauss->add_option("mode", mode, "region | feasible")->required()->check(CLI::IsMember({"region", "feasible"}));
    gauss->add_option("spec", spec, "Gaussian network spec (JSON)")->required();
    gauss->add_option("--rates", rates, "Per-node rates, comma separated")->delimiter(',');
    add_common(gauss);

    auto* ffd = app.add_subcommand("ffd", "Linear finite-field deterministic network region");
    ffd->add_option("spec", spec, "Finite-field network spec (JSON)")->required();
    ffd->add_option("--dist", dist, "Input pmf file or 'uniform'");
    ffd->add_flag("--crosscheck", crosscheck, "Compare rank values with entropies of the expanded channel");
    add_common(ffd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        Outcome o;
        if (*cutset)
            o = cmd_cutset(spec, input, common);
        else if (*feasible)
            o = cmd_feasible(spec, reduce, special, input, common);
        else if (*verify)
            o = cmd_verify(kind, ground, trials, samples, seed, common);
        else if (*gauss)
            o = cmd_gauss(mode, spec, rates, common);
        else
            o = cmd_ffd(spec, dist, crosscheck, common);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return emit(std::move(o), common, secs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
}
