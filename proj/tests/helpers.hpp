#pragma once

#include <cmath>

#include "swnet/feasibility.hpp"
#include "swnet/verify.hpp"

namespace fx {

using namespace swnet;

inline JointDistribution ctx_a() { return JointDistribution({{"X1", 2}, {"X2", 2}}, {0.25, 0.25, 0.25, 0.25}); }
inline JointDistribution ctx_b() { return JointDistribution({{"X1", 2}, {"X2", 2}}, {0.5, 0, 0, 0.5}); }
inline JointDistribution bernoulli(double p, const std::string& name = "X1") {
    return JointDistribution({{name, 2}}, {1 - p, p});
}
inline double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

inline SetFunction entropy_fn(const JointDistribution& d) {
    std::vector<VarMask> groups;
    for (std::size_t i = 0; i < d.num_vars(); ++i) groups.push_back(VarMask{1} << i);
    return entropy_set_function(d, GroundSet::numbered(static_cast<int>(d.num_vars())), groups, 0);
}

inline SetFunction table_fn(int n, std::vector<double> v) { return SetFunction(GroundSet::numbered(n), std::move(v)); }

// V=2, node 1 sends a bit to node 2 over a noiseless link; U1 ~ Bernoulli(p).
inline NetworkSpec identity_network(double p) {
    NetworkSpec net;
    net.nodes = GroundSet::numbered(2);
    net.sources = 0b01;
    net.destinations = 0b10;
    net.source_dist = bernoulli(p, "U1");
    DiscreteChannel ch;
    ch.in_card = {2, 1};
    ch.out_card = {1, 2};
    ch.table = {1, 0, 0, 1};
    net.channel = ch;
    return net;
}

// Aux with |Q| = 1, given input marginals and quantizers equal to Y (or
// singleton where the output alphabet is trivial or `keep` excludes the node).
inline AuxSpec yhat_equals_y(const NetworkSpec& net, const std::vector<std::vector<double>>& marginals,
                             Subset keep = ~Subset{0}) {
    AuxSpec aux;
    for (int v = 0; v < net.V(); ++v) {
        const int nx = input_card(net, v), ny = output_card(net, v);
        aux.input.push_back(marginals[v]);
        const bool copy = ny > 1 && contains_bit(keep, v);
        aux.yhat_card.push_back(copy ? ny : 1);
        std::vector<double> t;
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                for (int c = 0; c < (copy ? ny : 1); ++c) t.push_back(copy ? (c == y) : 1.0);
        aux.quantizer.push_back(t);
    }
    return aux;
}

}  // namespace fx
