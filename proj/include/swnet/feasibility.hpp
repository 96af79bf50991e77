#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "swnet/mlsw.hpp"
#include "swnet/netmodel.hpp"

namespace swnet {

enum class Strictness {
    strict,     // feasible iff slack > tol
    non_strict  // feasible iff slack >= -tol
};

struct CutReport {
    Subset set = 0;  // S
    int destination = -1;
    Subset cut = 0;  // W, S <= W, destination outside W
    double lhs = 0, rhs = 0, slack = 0;
    bool feasible = false;
    bool vacuous = false;  // nothing to deliver (lhs <= tol): satisfied regardless of rhs
};

struct FeasibilityReport {
    std::string condition;
    std::vector<CutReport> binding;  // one per (S, d), sorted by S then d
    bool feasible = true;
    double min_slack = INFINITY;
    // Nodes dropped per destination by constraint removal.
    std::map<int, Subset> removed;
};

// Generic cut sweep: for every S in `sets` and d in D \ S, the binding cut is
// the W (S <= W <= allowed(d) \ {d}) minimizing rhs(W, d).
struct CutProblem {
    int V = 0;
    std::vector<Subset> sets;
    Subset destinations = 0;
    std::function<Subset(int)> allowed;  // nodes available to cuts for destination d
    std::function<double(Subset)> lhs;
    std::function<double(Subset, int)> rhs;
    Strictness strictness = Strictness::strict;
    double tol = kDefaultTol;
};

FeasibilityReport evaluate_cuts(const CutProblem& p, const std::string& condition);
std::vector<Subset> nonempty_subsets(Subset s);

// Variable masks of a channel joint (Q, X_V, Y_V, Yhat_V).
struct NetworkVars {
    VarMask q = 0;
    std::vector<VarMask> x, y, yhat;
    NetworkVars(const JointDistribution& joint, const GroundSet& nodes);
    VarMask X(Subset s) const;
    VarMask Y(Subset s) const;
    VarMask Yhat(Subset s) const;
};

// Necessary condition at a fixed input pmf: H(U_S|U_{A\S}) < min I(X_W; Y_{W^c} | X_{W^c}).
FeasibilityReport cutset_necessary(const NetworkSpec& net, const JointDistribution& input, double tol = kDefaultTol);

// Sufficient condition: H(U_S|U_{A\S}) < min over W of
//   I(X_W; Y_d Yhat_{W^c\d} | X_{W^c} Q) - I(Y_W; Yhat_W | X_V Y_d Yhat_{W^c\d} Q).
FeasibilityReport sufficient_theorem2(const NetworkSpec& net, const AuxSpec& aux, double tol = kDefaultTol);

// The rhs above for one cut, restricted to the active node set (inactive nodes are noise).
double theorem2_cut_value(const EntropyCache& H, const NetworkVars& nv, Subset active, Subset w, int d);

// Per-destination layered conditions for the given ordered partitions of V \ {d}.
FeasibilityReport per_partition_sufficient(const NetworkSpec& net, const AuxSpec& aux,
                                           const std::map<int, OrderedPartition>& partitions,
                                           double tol = kDefaultTol);

// R_S >= H(Yhat_S X_S | X_{S^c} Yhat_{S^c} Y_d X_d Q) + H(U_S | U_{V\S}), S^c within V \ {d}.
FeasibilityReport unified_sufficient(const NetworkSpec& net, const AuxSpec& aux, double tol = kDefaultTol);

// Per-node budget R_v = H(X_v|Q) + H(Yhat_v|X_v Y_v Q).
double node_budget(const EntropyCache& H, const NetworkVars& nv, Subset s);
// R_W - H(Yhat_W X_W | X_{W^c} Yhat_{W^c\d} Y_d Q)
double cut_value_budget_form(const EntropyCache& H, const NetworkVars& nv, Subset w, int d);
// I(X_W; Yhat_{W^c\d} Y_d | X_{W^c} Q) - I(Y_W; Yhat_W | X_V Yhat_{W^c\d} Y_d Q)
double cut_value_information_form(const EntropyCache& H, const NetworkVars& nv, Subset w, int d);

struct RemovalResult {
    Subset kept = 0, removed = 0;
    std::vector<Subset> steps;
    bool monotone = true;  // h(W u T) <= h(W) + h(T) held at every step
};

// h_Z(S) = R_S - H(Yhat_S X_S | X_{Z\S} Yhat_{Z\(S u d)} Y_d Q)
double removal_function(const EntropyCache& H, const NetworkVars& nv, Subset active, Subset s, int d);
RemovalResult remove_additional_constraints(const NetworkSpec& net, const AuxSpec& aux, int d,
                                            double tol = kDefaultTol);
// Sufficient condition after per-destination removal.
FeasibilityReport sufficient_theorem2_reduced(const NetworkSpec& net, const AuxSpec& aux, double tol = kDefaultTol);

enum class SpecialKind { semi_deterministic, deterministic, aref, semi_aref, finite_field, state_dependent };
SpecialKind parse_special_kind(const std::string& s);
std::string to_string(SpecialKind k);

FeasibilityReport specialized_condition(const NetworkSpec& net, SpecialKind kind, const JointDistribution* input,
                                        double tol = kDefaultTol);
bool is_product_input(const JointDistribution& input, double tol = kDefaultTol);

// All nodes are sources with independent uniform messages of the given rates.
FeasibilityReport achievable_rate_region(const NetworkSpec& net, const AuxSpec& aux, const std::vector<double>& rates,
                                         double tol = kDefaultTol);

}  // namespace swnet
