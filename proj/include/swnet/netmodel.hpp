#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "swnet/setfunc.hpp"

namespace swnet {

// p(y_V | x_V): one row per input configuration (node 1 fastest), one column
// per output configuration (node 1 fastest).
struct DiscreteChannel {
    std::vector<int> in_card, out_card;
    std::vector<double> table;
};

// Y_v is the tuple of components Y_{v',v} drawn from p(y_{v',v} | x_{v'}).
struct ArefComponent {
    int from = 0, to = 0;
    int card = 1;
    std::vector<double> table;  // |X_from| rows, card columns
};

struct ArefChannel {
    std::vector<int> in_card;
    std::vector<ArefComponent> components;
};

// Y_v = sum_{v'} G[v][v'] X_{v'} over GF(q): rows are receivers.
struct FFChannel {
    int q = 2;
    std::vector<std::vector<int>> G;
};

struct SDChannel {
    std::vector<double> state_pmf;
    std::vector<std::variant<DiscreteChannel, FFChannel>> per_state;
};

// y_v = sum_{v'} gain[v'][v] x_{v'} + z_v, z_v ~ CN(0, noise[v]).
struct GaussianChannel {
    std::vector<std::vector<std::complex<double>>> gain;
    std::vector<double> noise;
};

using Channel = std::variant<DiscreteChannel, ArefChannel, FFChannel, SDChannel, GaussianChannel>;

struct NetworkSpec {
    GroundSet nodes;
    Subset sources = 0, destinations = 0;
    // One variable per source node, in node order.
    JointDistribution source_dist;
    Channel channel;

    int V() const { return nodes.size(); }
    void validate() const;
    bool is_gaussian() const { return std::holds_alternative<GaussianChannel>(channel); }
};

// Time sharing Q, p(x_v | q) and quantizers p(yhat_v | x_v, y_v, q).
struct AuxSpec {
    std::vector<double> q_pmf{1.0};
    std::vector<std::vector<double>> input;      // per node: |Q| rows x |X_v|
    std::vector<int> yhat_card;                  // per node
    std::vector<std::vector<double>> quantizer;  // per node: rows (x_v, y_v, q), x_v fastest
};

int input_card(const NetworkSpec& net, int v);
int output_card(const NetworkSpec& net, int v);

// Variable names used in induced joints.
std::string q_name();
std::string u_name(const GroundSet& g, int v);
std::string x_name(const GroundSet& g, int v);
std::string y_name(const GroundSet& g, int v);
std::string yhat_name(const GroundSet& g, int v);

// Converts aref/ff/single-state channels to the dense discrete form.
DiscreteChannel as_discrete(const NetworkSpec& net);
NetworkSpec aref_to_discrete(const NetworkSpec& net);
NetworkSpec ff_to_discrete(const NetworkSpec& net);

void validate_aux(const NetworkSpec& net, const AuxSpec& aux);

// Joint of (Q, U_A, X_V, Y_V, Yhat_V).
JointDistribution induced_joint(const NetworkSpec& net, const AuxSpec& aux);
// Same without the source variables; the sources are independent of it.
JointDistribution channel_joint(const NetworkSpec& net, const AuxSpec& aux);
// Joint of (X_V, Y_V) for a given input pmf over X_V (variables X<label>).
JointDistribution input_output_joint(const NetworkSpec& net, const JointDistribution& input);
JointDistribution input_output_joint(const DiscreteChannel& ch, const GroundSet& nodes,
                                     const JointDistribution& input);

// Product of per-node marginals as an input pmf.
JointDistribution product_input(const GroundSet& nodes, const std::vector<std::vector<double>>& marginals);
JointDistribution uniform_input(const NetworkSpec& net);

bool is_prime(int q);
// Rank over GF(q) of the transfer matrix from cut w to its complement.
int ff_rank(const std::vector<std::vector<int>>& G, Subset w, int q);
int ff_rank(const FFChannel& ch, Subset w);

// E_S[cut value]: rank*log2 q for finite-field states, H(Y_{W^c}|X_{W^c}, S=s)
// for discrete states (evaluated at `input`, required then).
double sd_expected_cut(const NetworkSpec& net, Subset w, const JointDistribution* input = nullptr);

// Source entropies H(U_S | U_T) over node subsets (non-source nodes ignored).
class SourceEntropy {
public:
    explicit SourceEntropy(const NetworkSpec& net);
    double H(Subset s, Subset given = 0) const;

private:
    const NetworkSpec* net_;
    EntropyCache cache_;
    VarMask vars_of(Subset s) const;
};

}  // namespace swnet
