// Serial vs OpenMP kernel timings. Usage: bench_kernels [vars] [reps]
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "swnet/kernels.hpp"
#include "swnet/setfunc.hpp"
#include "swnet/verify.hpp"

using namespace swnet;

namespace {

template <class F>
double best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-18s serial %9.4f s   omp %9.4f s   speedup %5.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 14;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
    std::printf("threads: %d, binary variables: %d\n", kernels::max_threads(), n);

    Rng rng(42);
    std::vector<Variable> vars;
    for (int i = 0; i < n; ++i) vars.push_back({"V" + std::to_string(i), 2});
    JointDistribution joint(vars, rng.dirichlet(std::size_t{1} << n));
    std::vector<VarMask> groups;
    for (int i = 0; i < n; ++i) groups.push_back(VarMask{1} << i);

    std::vector<double> a, b;
    row("entropy_table", best_of(reps, [&] { a = kernels::serial::entropy_table(joint, groups, 0); }),
        best_of(reps, [&] { b = kernels::omp::entropy_table(joint, groups, 0); }));
    if (a != b) std::printf("  mismatch between serial and omp entropy tables\n");

    std::optional<kernels::Violation> va, vb;
    row("submodular_scan", best_of(reps, [&] { va = kernels::serial::submodular_scan(a, n, kDefaultTol); }),
        best_of(reps, [&] { vb = kernels::omp::submodular_scan(a, n, kDefaultTol); }));
    if (va.has_value() != vb.has_value()) std::printf("  mismatch between serial and omp scans\n");

    std::vector<int> cards(n, 2);
    std::vector<std::vector<double>> tables;
    std::vector<kernels::FactorLayout> factors;
    tables.reserve(n);
    for (int i = 0; i < n; ++i) {
        const std::size_t rows = i ? 2 : 1;
        std::vector<double> t;
        for (std::size_t r = 0; r < rows; ++r) {
            auto p = rng.dirichlet(2);
            t.insert(t.end(), p.begin(), p.end());
        }
        tables.push_back(std::move(t));
    }
    for (int i = 0; i < n; ++i) {
        kernels::FactorLayout f;
        f.child_vars = {i};
        if (i) f.parent_vars = {i - 1};
        f.table = &tables[i];
        f.cols = 2;
        factors.push_back(f);
    }
    row("factor_product", best_of(reps, [&] { a = kernels::serial::factor_product(cards, factors); }),
        best_of(reps, [&] { b = kernels::omp::factor_product(cards, factors); }));
    if (a != b) std::printf("  mismatch between serial and omp factor products\n");
    return 0;
}
