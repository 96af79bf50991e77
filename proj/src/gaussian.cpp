#include "swnet/gaussian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "swnet/kernels.hpp"

namespace swnet {

namespace {

using Eigen::MatrixXcd;

MatrixXcd to_eigen(const CMatrix& H) {
    const Eigen::Index r = static_cast<Eigen::Index>(H.size());
    const Eigen::Index c = r ? static_cast<Eigen::Index>(H[0].size()) : 0;
    MatrixXcd M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(H[i].size()) != c) throw InputError("channel matrix rows differ in length");
        for (Eigen::Index j = 0; j < c; ++j) M(i, j) = H[i][j];
    }
    return M;
}

const GaussianChannel& gaussian_of(const NetworkSpec& net) {
    const auto* ch = std::get_if<GaussianChannel>(&net.channel);
    if (!ch) throw InputError("not a gaussian network");
    return *ch;
}

void check_cut(const NetworkSpec& net, Subset w) {
    if (w == 0 || w == net.nodes.full() || !is_subset(w, net.nodes.full()))
        throw InputError("cut must be a nonempty proper subset of the nodes");
}

}  // namespace

WaterFilling waterfill_gains(std::vector<double> gains, double power) {
    if (power < 0) throw InputError("power must be nonnegative");
    std::sort(gains.begin(), gains.end(), std::greater<>());
    WaterFilling wf;
    wf.gains = gains;
    wf.powers.assign(gains.size(), 0.0);
    std::size_t usable = 0;
    while (usable < gains.size() && gains[usable] > 0) ++usable;
    if (usable == 0 || power == 0) return wf;
    // Largest active set whose level clears the weakest active floor.
    double floor_sum = 0;
    for (std::size_t i = 0; i < usable; ++i) floor_sum += 1.0 / gains[i];
    for (std::size_t m = usable; m >= 1; --m) {
        const double mu = (power + floor_sum) / static_cast<double>(m);
        if (mu > 1.0 / gains[m - 1]) {
            wf.level = mu;
            for (std::size_t i = 0; i < m; ++i) wf.powers[i] = mu - 1.0 / gains[i];
            break;
        }
        floor_sum -= 1.0 / gains[m - 1];
    }
    for (std::size_t i = 0; i < gains.size(); ++i) wf.capacity += std::log2(1.0 + wf.powers[i] * gains[i]);
    return wf;
}

WaterFilling waterfill(const CMatrix& H, double power) {
    if (H.empty() || H[0].empty()) return waterfill_gains({}, power);
    Eigen::JacobiSVD<MatrixXcd> svd(to_eigen(H));
    std::vector<double> g;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        double s = svd.singularValues()(i);
        g.push_back(s * s);
    }
    return waterfill_gains(std::move(g), power);
}

double kkt_residual(const WaterFilling& wf) {
    double worst = 0;
    for (std::size_t i = 0; i < wf.gains.size(); ++i) {
        if (wf.gains[i] <= 0) continue;
        const double floor = 1.0 / wf.gains[i];
        if (wf.powers[i] > 0)
            worst = std::max(worst, std::abs(wf.level - floor - wf.powers[i]));
        else
            worst = std::max(worst, std::max(0.0, wf.level - floor));
        worst = std::max(worst, std::max(0.0, -wf.powers[i]));
    }
    return worst;
}

CMatrix cut_matrix(const GaussianChannel& ch, Subset w) {
    const int V = static_cast<int>(ch.noise.size());
    const auto tx = members(w), rx = members(full_set(V) & ~w);
    CMatrix M(rx.size(), std::vector<std::complex<double>>(tx.size()));
    for (std::size_t i = 0; i < rx.size(); ++i)
        for (std::size_t j = 0; j < tx.size(); ++j) M[i][j] = ch.gain[tx[j]][rx[i]] / std::sqrt(ch.noise[rx[i]]);
    return M;
}

double cut_capacity_waterfilling(const NetworkSpec& net, Subset w) {
    check_cut(net, w);
    return waterfill(cut_matrix(gaussian_of(net), w), static_cast<double>(popcount(w))).capacity;
}

double kappa(int V, int w_size) {
    if (w_size < 1 || w_size >= V) throw InputError("kappa: cut size must be in [1, V-1]");
    const int n = std::min(w_size, V - w_size);
    return n * std::log2(static_cast<double>(w_size + n) / n) + V - 1;
}

double kappa_ceiling(int V) {
    double best = -INFINITY;
    for (int n = 1; n <= V / 2; ++n) best = std::max(best, n * std::log2(static_cast<double>(V) / n) + V - 1);
    return best;
}

Subset receiving_nodes(const GaussianChannel& ch) {
    const int V = static_cast<int>(ch.noise.size());
    Subset r = 0;
    for (int v = 0; v < V; ++v)
        for (int u = 0; u < V; ++u)
            if (u != v && ch.gain[u][v] != std::complex<double>(0, 0)) r |= Subset{1} << v;
    return r;
}

double inner_bound_cut(const NetworkSpec& net, Subset w, int d) {
    check_cut(net, w);
    const auto& ch = gaussian_of(net);
    if (d < 0 || d >= net.V() || contains_bit(w, d)) throw InputError("inner_bound_cut: destination must lie outside the cut");
    const auto tx = members(w);
    std::vector<std::pair<int, double>> obs{{d, ch.noise[d]}};
    for (int u : members(net.nodes.full() & ~w & ~(Subset{1} << d))) obs.push_back({u, 2.0 * ch.noise[u]});
    MatrixXcd A(obs.size(), tx.size());
    for (std::size_t i = 0; i < obs.size(); ++i)
        for (std::size_t j = 0; j < tx.size(); ++j)
            A(i, j) = ch.gain[tx[j]][obs[i].first] / std::sqrt(obs[i].second);
    MatrixXcd K = MatrixXcd::Identity(A.rows(), A.rows()) + A * A.adjoint();
    Eigen::LLT<MatrixXcd> llt(K);
    double logdet = 0;
    for (Eigen::Index i = 0; i < K.rows(); ++i) logdet += 2.0 * std::log2(std::real(llt.matrixL()(i, i)));
    return logdet - popcount(w & receiving_nodes(ch));
}

std::vector<GaussianCutResult> gaussian_cut_table(const NetworkSpec& net) {
    net.validate();
    const Subset full = net.nodes.full();
    std::vector<GaussianCutResult> rows;
    for (Subset w = 1; w < full; ++w)
        for (int d : members(net.destinations & ~w)) rows.push_back({w, d});
    auto cwf = kernels::omp::map_indices(rows.size(), [&](std::size_t i) { return cut_capacity_waterfilling(net, rows[i].cut); });
    auto inner = kernels::omp::map_indices(rows.size(), [&](std::size_t i) {
        return inner_bound_cut(net, rows[i].cut, rows[i].destination);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].cwf = cwf[i];
        rows[i].inner = inner[i];
        rows[i].kappa = kappa(net.V(), popcount(rows[i].cut));
        rows[i].gap = cwf[i] - inner[i];
    }
    return rows;
}

namespace {

GaussianReport sandwich(const NetworkSpec& net, std::vector<Subset> sets, std::function<double(Subset)> lhs,
                        bool clamp, double tol) {
    GaussianReport r;
    r.cuts = gaussian_cut_table(net);
    const int V = net.V();
    std::vector<double> cwf(std::size_t{1} << V, 0.0), inner_tab((std::size_t{1} << V) * V, 0.0);
    for (const auto& c : r.cuts) {
        cwf[c.cut] = c.cwf;
        inner_tab[c.cut * V + c.destination] = c.inner;
    }
    auto plus = [clamp](double x) { return clamp ? std::max(0.0, x) : x; };
    CutProblem p;
    p.V = V;
    p.sets = std::move(sets);
    p.destinations = net.destinations;
    p.lhs = std::move(lhs);
    p.tol = tol;
    p.rhs = [&](Subset w, int d) { return plus(inner_tab[w * V + d]); };
    r.inner = evaluate_cuts(p, "gaussian_inner");
    p.rhs = [&](Subset w, int) { return plus(cwf[w] - kappa(V, popcount(w))); };
    r.constant_gap = evaluate_cuts(p, "gaussian_constant_gap");
    p.rhs = [&](Subset w, int) { return cwf[w]; };
    r.outer = evaluate_cuts(p, "gaussian_cutset");
    r.verdict = r.inner.feasible ? "feasible" : (!r.outer.feasible ? "infeasible" : "gap-indeterminate");
    return r;
}

}  // namespace

GaussianReport gaussian_feasibility(const NetworkSpec& net, double tol) {
    gaussian_of(net);
    net.validate();
    auto src = std::make_shared<SourceEntropy>(net);
    return sandwich(net, nonempty_subsets(net.sources), [src, &net](Subset s) { return src->H(s, net.sources & ~s); },
                    false, tol);
}

GaussianReport gaussian_rate_region(const NetworkSpec& net, const std::vector<double>& rates, double tol) {
    gaussian_of(net);
    if (static_cast<int>(rates.size()) != net.V()) throw InputError("one rate per node required");
    for (double x : rates)
        if (!(x >= 0)) throw InputError("rates must be nonnegative");
    auto sums = std::make_shared<std::vector<double>>(subset_sums(rates));
    std::vector<Subset> sets;
    for (Subset s : nonempty_subsets(net.nodes.full()))
        if ((*sums)[s] > 0) sets.push_back(s);
    return sandwich(net, std::move(sets), [sums](Subset s) { return (*sums)[s]; }, true, tol);
}

}  // namespace swnet
