#include "swnet/setfunc.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>

#include "swnet/kernels.hpp"

namespace swnet {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kRowTol = 1e-9;

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
}

}  // namespace

JointDistribution::JointDistribution(std::vector<Variable> vars, std::vector<double> probs)
    : vars_(std::move(vars)), probs_(std::move(probs)) {
    if (vars_.size() > 64) throw CapError("joint distribution: more than 64 variables");
    std::set<std::string> names;
    std::size_t cells = 1;
    strides_.resize(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].card < 1) throw InputError("variable " + vars_[i].name + ": alphabet size must be >= 1");
        if (!names.insert(vars_[i].name).second) throw InputError("duplicate variable " + vars_[i].name);
        strides_[i] = cells;
        cells *= static_cast<std::size_t>(vars_[i].card);
        if (cells > kMaxCells) throw CapError("joint distribution exceeds 2^24 cells");
    }
    if (probs_.size() != cells)
        throw InputError("joint distribution: expected " + std::to_string(cells) + " cells, got " +
                         std::to_string(probs_.size()));
    double total = 0;
    for (double p : probs_) {
        if (!(p >= 0)) throw InputError("joint distribution: negative or NaN entry");
        total += p;
    }
    if (std::abs(total - 1.0) > kSumTol) throw InputError("joint distribution does not sum to 1");
}

int JointDistribution::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    throw InputError("unknown variable " + name);
}

bool JointDistribution::has(const std::string& name) const {
    return std::any_of(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.name == name; });
}

VarMask JointDistribution::mask_of(const std::vector<std::string>& names) const {
    VarMask m = 0;
    for (const auto& n : names) m |= VarMask{1} << index_of(n);
    return m;
}

VarMask JointDistribution::all() const {
    return vars_.size() == 64 ? ~VarMask{0} : (VarMask{1} << vars_.size()) - 1;
}

std::vector<double> JointDistribution::marginal(VarMask sel) const {
    const std::size_t n = vars_.size();
    std::vector<std::size_t> mstride(n, 0);
    std::size_t msize = 1;
    for (std::size_t i = 0; i < n; ++i)
        if ((sel >> i) & 1u) {
            mstride[i] = msize;
            msize *= vars_[i].card;
        }
    std::vector<double> out(msize, 0.0);
    if (msize == 1) {
        out[0] = std::accumulate(probs_.begin(), probs_.end(), 0.0);
        return out;
    }
    std::vector<int> digit(n, 0);
    std::size_t midx = 0;
    for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
        out[midx] += probs_[cell];
        for (std::size_t i = 0; i < n; ++i) {
            midx += mstride[i];
            if (++digit[i] < vars_[i].card) break;
            midx -= mstride[i] * vars_[i].card;
            digit[i] = 0;
        }
    }
    return out;
}

double entropy_of(const std::vector<double>& pmf) {
    double h = 0;
    for (double p : pmf)
        if (p > 0) h -= p * std::log2(p);
    return h;
}

double JointDistribution::entropy(VarMask vars) const {
    if (vars == 0) return 0.0;
    return entropy_of(marginal(vars));
}

double EntropyCache::H(VarMask a) const {
    if (a == 0) return 0.0;
    {
        std::shared_lock lk(mu_);
        auto it = memo_.find(a);
        if (it != memo_.end()) return it->second;
    }
    double h = dist_->entropy(a);
    std::unique_lock lk(mu_);
    memo_.emplace(a, h);
    return h;
}

double EntropyCache::I(VarMask a, VarMask b, VarMask given) const {
    return H(a | given) + H(b | given) - H(a | b | given) - H(given);
}

double entropy(const JointDistribution& dist, const std::vector<std::string>& vars) {
    return dist.entropy(dist.mask_of(vars));
}

double conditional_entropy(const JointDistribution& dist, const std::vector<std::string>& vars,
                           const std::vector<std::string>& given) {
    VarMask s = dist.mask_of(vars), t = dist.mask_of(given);
    return dist.entropy(s | t) - dist.entropy(t);
}

double mutual_information(const JointDistribution& dist, const std::vector<std::string>& a,
                          const std::vector<std::string>& b, const std::vector<std::string>& given,
                          double tol) {
    VarMask ma = dist.mask_of(a), mb = dist.mask_of(b), mg = dist.mask_of(given);
    if ((ma & mb) || (ma & mg) || (mb & mg))
        throw InputError("mutual_information: variable sets overlap");
    // H(A|G) - H(A|B,G)
    double v = (dist.entropy(ma | mg) - dist.entropy(mg)) - (dist.entropy(ma | mb | mg) - dist.entropy(mb | mg));
    if (v < 0 && v > -tol) v = 0;
    return v;
}

GroundSet::GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() > static_cast<std::size_t>(kMaxGround)) throw CapError("ground set larger than 16");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw InputError("duplicate ground-set label");
}

GroundSet GroundSet::numbered(int n) {
    std::vector<std::string> l;
    for (int i = 1; i <= n; ++i) l.push_back(std::to_string(i));
    return GroundSet(std::move(l));
}

int GroundSet::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == label) return i;
    throw InputError("unknown node " + label);
}

Subset GroundSet::mask_of(const std::vector<std::string>& labels) const {
    Subset s = 0;
    for (const auto& l : labels) s |= Subset{1} << index_of(l);
    return s;
}

GroundSet GroundSet::restrict(Subset s) const {
    std::vector<std::string> l;
    for (int i : members(s)) l.push_back(labels_[i]);
    return GroundSet(std::move(l));
}

std::string GroundSet::format(Subset s) const {
    std::vector<std::string> l;
    for (int i : members(s)) l.push_back(labels_[i]);
    return "{" + join(l) + "}";
}

SetFunction::SetFunction(GroundSet ground, std::vector<double> values)
    : ground_(std::move(ground)), values_(std::move(values)) {
    if (values_.size() != (std::size_t{1} << ground_.size()))
        throw InputError("set function: table size does not match ground set");
    const double base = values_[0];
    if (base != 0)
        for (auto& v : values_) v -= base;
}

SetFunction SetFunction::operator+(const SetFunction& o) const {
    if (!(ground_ == o.ground_)) throw InputError("set function sum: ground sets differ");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + o.values_[i];
    return SetFunction(ground_, std::move(v));
}

SetFunction entropy_set_function(const JointDistribution& dist, const GroundSet& ground,
                                 const std::vector<VarMask>& groups, VarMask side) {
    if (static_cast<int>(groups.size()) != ground.size()) throw InputError("one variable group per label required");
    VarMask seen = 0;
    for (VarMask g : groups) {
        if (seen & g) throw InputError("entropy_set_function: overlapping groups");
        seen |= g;
    }
    if (seen & side) throw InputError("entropy_set_function: side information overlaps a group");
    auto table = kernels::omp::entropy_table(dist, groups, side);
    const double hs = table[0];
    for (auto& v : table) v -= hs;
    return SetFunction(ground, std::move(table));
}

SetFunction entropy_set_function(const JointDistribution& dist,
                                 const std::vector<std::pair<std::string, std::vector<std::string>>>& groups,
                                 const std::vector<std::string>& side) {
    std::vector<std::string> labels;
    std::vector<VarMask> masks;
    for (const auto& [label, vars] : groups) {
        labels.push_back(label);
        masks.push_back(dist.mask_of(vars));
    }
    return entropy_set_function(dist, GroundSet(labels), masks, dist.mask_of(side));
}

JointDistribution build_factored_joint(const Factorization& spec) {
    std::map<std::string, int> idx;
    std::vector<int> cards;
    std::size_t cells = 1;
    for (const auto& v : spec.variables) {
        if (v.card < 1) throw InputError("variable " + v.name + ": alphabet size must be >= 1");
        if (!idx.emplace(v.name, static_cast<int>(cards.size())).second)
            throw InputError("duplicate variable " + v.name);
        cards.push_back(v.card);
        cells *= static_cast<std::size_t>(v.card);
        if (cells > kMaxCells) throw CapError("factored joint exceeds 2^24 cells");
    }
    auto lookup = [&](const std::string& n) {
        auto it = idx.find(n);
        if (it == idx.end()) throw InputError("factor references unknown variable " + n);
        return it->second;
    };
    std::vector<char> defined(cards.size(), 0);
    std::vector<kernels::FactorLayout> layout;
    for (std::size_t f = 0; f < spec.factors.size(); ++f) {
        const Factor& fac = spec.factors[f];
        kernels::FactorLayout L;
        std::size_t rows = 1, cols = 1;
        for (const auto& p : fac.parents) {
            int i = lookup(p);
            if (!defined[i]) throw InputError("factor " + std::to_string(f) + ": parent " + p + " not yet defined");
            L.parent_vars.push_back(i);
            rows *= cards[i];
        }
        for (const auto& c : fac.children) {
            int i = lookup(c);
            if (defined[i]) throw InputError("variable " + c + " defined by more than one factor");
            L.child_vars.push_back(i);
            cols *= cards[i];
        }
        for (int i : L.child_vars) defined[i] = 1;
        if (fac.table.size() != rows * cols)
            throw InputError("factor " + std::to_string(f) + ": table has wrong size");
        for (std::size_t r = 0; r < rows; ++r) {
            double s = 0;
            for (std::size_t c = 0; c < cols; ++c) {
                double p = fac.table[r * cols + c];
                if (!(p >= 0)) throw InputError("factor " + std::to_string(f) + ": negative entry");
                s += p;
            }
            if (std::abs(s - 1.0) > kRowTol)
                throw InputError("factor " + std::to_string(f) + ": row " + std::to_string(r) + " does not sum to 1");
        }
        L.table = &fac.table;
        L.cols = cols;
        layout.push_back(std::move(L));
    }
    for (std::size_t i = 0; i < cards.size(); ++i)
        if (!defined[i]) throw InputError("variable " + spec.variables[i].name + " has no factor");
    auto probs = kernels::omp::factor_product(cards, layout);
    // Rows were checked to 1e-9; renormalize so the joint sums to 1 at machine precision.
    double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (auto& p : probs) p /= total;
    return JointDistribution(spec.variables, std::move(probs));
}

Conditional conditional_table(const JointDistribution& dist, const std::vector<std::string>& children,
                              const std::vector<std::string>& parents) {
    std::vector<int> ci, pi;
    for (const auto& c : children) ci.push_back(dist.index_of(c));
    for (const auto& p : parents) pi.push_back(dist.index_of(p));
    Conditional out;
    out.rows = 1;
    out.cols = 1;
    for (int i : pi) out.rows *= dist.vars()[i].card;
    for (int i : ci) out.cols *= dist.vars()[i].card;
    out.table.assign(out.rows * out.cols, 0.0);
    out.parent_pmf.assign(out.rows, 0.0);
    const auto& vars = dist.vars();
    for (std::size_t cell = 0; cell < dist.size(); ++cell) {
        std::size_t r = 0, c = 0, rs = 1, cs = 1;
        for (int i : pi) {
            r += ((cell / dist.stride(i)) % vars[i].card) * rs;
            rs *= vars[i].card;
        }
        for (int i : ci) {
            c += ((cell / dist.stride(i)) % vars[i].card) * cs;
            cs *= vars[i].card;
        }
        out.table[r * out.cols + c] += dist.probs()[cell];
        out.parent_pmf[r] += dist.probs()[cell];
    }
    for (std::size_t r = 0; r < out.rows; ++r)
        if (out.parent_pmf[r] > 0)
            for (std::size_t c = 0; c < out.cols; ++c) out.table[r * out.cols + c] /= out.parent_pmf[r];
    return out;
}

}  // namespace swnet
