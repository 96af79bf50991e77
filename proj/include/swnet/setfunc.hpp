#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "swnet/common.hpp"

namespace swnet {

struct Variable {
    std::string name;
    int card = 1;
};

// Dense pmf over named finite variables; cell index is mixed radix with the
// first variable varying fastest.
class JointDistribution {
public:
    JointDistribution() = default;
    JointDistribution(std::vector<Variable> vars, std::vector<double> probs);

    std::size_t num_vars() const { return vars_.size(); }
    const std::vector<Variable>& vars() const { return vars_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    std::size_t stride(std::size_t i) const { return strides_[i]; }

    int index_of(const std::string& name) const;
    bool has(const std::string& name) const;
    VarMask mask_of(const std::vector<std::string>& names) const;
    VarMask all() const;

    // Marginal pmf over the selected variables, in their original order.
    std::vector<double> marginal(VarMask vars) const;
    double entropy(VarMask vars) const;

private:
    std::vector<Variable> vars_;
    std::vector<double> probs_;
    std::vector<std::size_t> strides_;
};

double entropy_of(const std::vector<double>& pmf);

// Memoized entropies of one joint; safe to share between threads.
class EntropyCache {
public:
    explicit EntropyCache(const JointDistribution& dist) : dist_(&dist) {}
    EntropyCache(const EntropyCache&) = delete;
    EntropyCache& operator=(const EntropyCache&) = delete;

    double H(VarMask a) const;
    double H(VarMask a, VarMask given) const { return H(a | given) - H(given); }
    // I(a; b | given); overlap allowed here, callers check disjointness.
    double I(VarMask a, VarMask b, VarMask given = 0) const;
    const JointDistribution& dist() const { return *dist_; }

private:
    const JointDistribution* dist_;
    mutable std::shared_mutex mu_;
    mutable std::unordered_map<VarMask, double> memo_;
};

double entropy(const JointDistribution& dist, const std::vector<std::string>& vars);
double conditional_entropy(const JointDistribution& dist, const std::vector<std::string>& vars,
                           const std::vector<std::string>& given);
double mutual_information(const JointDistribution& dist, const std::vector<std::string>& a,
                          const std::vector<std::string>& b, const std::vector<std::string>& given = {},
                          double tol = kDefaultTol);

class GroundSet {
public:
    GroundSet() = default;
    explicit GroundSet(std::vector<std::string> labels);
    static GroundSet numbered(int n);  // labels "1".."n"

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_[i]; }
    int index_of(const std::string& label) const;
    Subset mask_of(const std::vector<std::string>& labels) const;
    Subset full() const { return full_set(size()); }
    GroundSet restrict(Subset s) const;
    std::string format(Subset s) const;  // "{1,3}"
    bool operator==(const GroundSet&) const = default;

private:
    std::vector<std::string> labels_;
};

// f: 2^ground -> R, normalized so that f(empty) = 0.
class SetFunction {
public:
    SetFunction() = default;
    SetFunction(GroundSet ground, std::vector<double> values);

    const GroundSet& ground() const { return ground_; }
    int n() const { return ground_.size(); }
    double operator()(Subset s) const { return values_[s]; }
    const std::vector<double>& values() const { return values_; }

    SetFunction operator+(const SetFunction& o) const;

private:
    GroundSet ground_;
    std::vector<double> values_;
};

// f(S) = H(vars of S, side) - H(side).
SetFunction entropy_set_function(const JointDistribution& dist,
                                 const std::vector<std::pair<std::string, std::vector<std::string>>>& groups,
                                 const std::vector<std::string>& side = {});
SetFunction entropy_set_function(const JointDistribution& dist, const GroundSet& ground,
                                 const std::vector<VarMask>& groups, VarMask side);

// Product of conditional pmf factors. Each factor's table has one row per
// parent configuration (first parent fastest) and one column per child
// configuration (first child fastest).
struct Factor {
    std::vector<std::string> children;
    std::vector<std::string> parents;
    std::vector<double> table;
};

struct Factorization {
    std::vector<Variable> variables;
    std::vector<Factor> factors;  // parents must be children of earlier factors
};

JointDistribution build_factored_joint(const Factorization& spec);

// p(child | parent) recovered from a joint, rows laid out as in Factor.
struct Conditional {
    std::vector<double> table;
    std::vector<double> parent_pmf;
    std::size_t rows = 0, cols = 0;
};
Conditional conditional_table(const JointDistribution& dist, const std::vector<std::string>& children,
                              const std::vector<std::string>& parents);

}  // namespace swnet
