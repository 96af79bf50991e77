#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "swnet/common.hpp"

namespace swnet {
class JointDistribution;
}

// Hot loops, each with a serial reference and an OpenMP variant that must
// produce bit-identical output.
namespace swnet::kernels {

struct FactorLayout {
    std::vector<int> child_vars, parent_vars;
    const std::vector<double>* table = nullptr;
    std::size_t cols = 1;
};

struct Violation {
    Subset a = 0, b = 0;
    double excess = 0;
};

namespace serial {
// H(union of groups[i] for i in S, side) for every S in 2^n.
std::vector<double> entropy_table(const JointDistribution& dist, const std::vector<VarMask>& groups,
                                  VarMask side);
std::vector<double> factor_product(const std::vector<int>& cards, const std::vector<FactorLayout>& factors);
// First (lowest a, then b) pair with f(a&b)+f(a|b) > f(a)+f(b)+tol.
std::optional<Violation> submodular_scan(const std::vector<double>& f, int n, double tol);
// out[i] = fn(i); used for per-cut tables.
std::vector<double> map_indices(std::size_t n, const std::function<double(std::size_t)>& fn);
}  // namespace serial

namespace omp {
std::vector<double> entropy_table(const JointDistribution& dist, const std::vector<VarMask>& groups,
                                  VarMask side);
std::vector<double> factor_product(const std::vector<int>& cards, const std::vector<FactorLayout>& factors);
std::optional<Violation> submodular_scan(const std::vector<double>& f, int n, double tol);
std::vector<double> map_indices(std::size_t n, const std::function<double(std::size_t)>& fn);
}  // namespace omp

int max_threads();

}  // namespace swnet::kernels
