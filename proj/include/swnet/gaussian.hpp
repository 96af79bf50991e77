#pragma once

#include <complex>
#include <string>
#include <vector>

#include "swnet/feasibility.hpp"

namespace swnet {

using CMatrix = std::vector<std::vector<std::complex<double>>>;

struct WaterFilling {
    double capacity = 0;  // bits
    double level = 0;     // water level mu
    std::vector<double> gains;   // squared singular values, descending
    std::vector<double> powers;  // per mode
};

// Capacity of y = H x + z, z ~ CN(0, I), under tr(Q) <= power.
WaterFilling waterfill(const CMatrix& H, double power);
WaterFilling waterfill_gains(std::vector<double> gains, double power);
// Largest KKT violation of an allocation: |mu - 1/g - Q| on active modes,
// max(0, mu - 1/g) on inactive ones.
double kkt_residual(const WaterFilling& wf);

// Whitened transfer matrix from the nodes of w to the rest.
CMatrix cut_matrix(const GaussianChannel& ch, Subset w);
double cut_capacity_waterfilling(const NetworkSpec& net, Subset w);

// n log2(1 + |W|/n) + V - 1 with n = min(|W|, |W^c|).
double kappa(int V, int w_size);
// max over 1 <= n <= V/2 of n log2(V/n) + V - 1
double kappa_ceiling(int V);

// Unit-power i.i.d. inputs and quantization at noise level:
// I(X_W; Y_d Yhat_{W^c\d} | X_{W^c}) - (number of receiving nodes in W).
double inner_bound_cut(const NetworkSpec& net, Subset w, int d);
// Nodes with at least one nonzero incoming gain.
Subset receiving_nodes(const GaussianChannel& ch);

struct GaussianCutResult {
    Subset cut = 0;
    int destination = -1;
    double cwf = 0, inner = 0, kappa = 0, gap = 0;
};

struct GaussianReport {
    std::string verdict;  // "feasible", "infeasible", "gap-indeterminate"
    FeasibilityReport inner, outer, constant_gap;
    std::vector<GaussianCutResult> cuts;  // sorted by (cut, destination)
    int exit_code() const { return verdict == "feasible" ? 0 : 1; }
};

std::vector<GaussianCutResult> gaussian_cut_table(const NetworkSpec& net);
// Sources against inner (achievable), constant-gap and cut-set (outer) bounds.
GaussianReport gaussian_feasibility(const NetworkSpec& net, double tol = kDefaultTol);
// All nodes carry independent messages of the given rates.
GaussianReport gaussian_rate_region(const NetworkSpec& net, const std::vector<double>& rates, double tol = kDefaultTol);

}  // namespace swnet
