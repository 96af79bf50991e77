#include "swnet/kernels.hpp"

#include <exception>
#include <limits>

#include "swnet/setfunc.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swnet::kernels {

namespace {

VarMask union_of(const std::vector<VarMask>& groups, Subset s) {
    VarMask m = 0;
    for (int i : members(s)) m |= groups[i];
    return m;
}

double cell_product(std::size_t cell, const std::vector<int>& cards, const std::vector<FactorLayout>& factors,
                    std::vector<int>& digit) {
    std::size_t rest = cell;
    for (std::size_t i = 0; i < cards.size(); ++i) {
        digit[i] = static_cast<int>(rest % cards[i]);
        rest /= cards[i];
    }
    double p = 1.0;
    for (const auto& f : factors) {
        std::size_t r = 0, c = 0, rs = 1, cs = 1;
        for (int v : f.parent_vars) {
            r += digit[v] * rs;
            rs *= cards[v];
        }
        for (int v : f.child_vars) {
            c += digit[v] * cs;
            cs *= cards[v];
        }
        p *= (*f.table)[r * f.cols + c];
        if (p == 0) break;
    }
    return p;
}

// Pair test for small ground sets, increment test (S+i, S+j) above that.
constexpr int kFullPairMax = 10;

std::optional<Violation> scan_row(const std::vector<double>& f, int n, Subset a, double tol) {
    const Subset N = full_set(n);
    if (n <= kFullPairMax) {
        for (Subset b = 0; b <= N; ++b) {
            double ex = f[a & b] + f[a | b] - f[a] - f[b];
            if (ex > tol) return Violation{a, b, ex};
        }
        return std::nullopt;
    }
    for (int i = 0; i < n; ++i) {
        if (contains_bit(a, i)) continue;
        for (int j = i + 1; j < n; ++j) {
            if (contains_bit(a, j)) continue;
            Subset ai = a | (1u << i), aj = a | (1u << j);
            double ex = f[a] + f[ai | aj] - f[ai] - f[aj];
            if (ex > tol) return Violation{ai, aj, ex};
        }
    }
    return std::nullopt;
}

}  // namespace

namespace serial {

std::vector<double> entropy_table(const JointDistribution& dist, const std::vector<VarMask>& groups, VarMask side) {
    const std::size_t N = std::size_t{1} << groups.size();
    std::vector<double> out(N);
    for (std::size_t s = 0; s < N; ++s) out[s] = dist.entropy(union_of(groups, static_cast<Subset>(s)) | side);
    return out;
}

std::vector<double> factor_product(const std::vector<int>& cards, const std::vector<FactorLayout>& factors) {
    std::size_t cells = 1;
    for (int c : cards) cells *= c;
    std::vector<double> out(cells);
    std::vector<int> digit(cards.size());
    for (std::size_t cell = 0; cell < cells; ++cell) out[cell] = cell_product(cell, cards, factors, digit);
    return out;
}

std::optional<Violation> submodular_scan(const std::vector<double>& f, int n, double tol) {
    const Subset N = full_set(n);
    for (Subset a = 0; a <= N; ++a)
        if (auto v = scan_row(f, n, a, tol)) return v;
    return std::nullopt;
}

std::vector<double> map_indices(std::size_t n, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
}

}  // namespace serial

namespace omp {

std::vector<double> entropy_table(const JointDistribution& dist, const std::vector<VarMask>& groups, VarMask side) {
    const long long N = 1LL << groups.size();
    std::vector<double> out(N);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long s = 0; s < N; ++s) out[s] = dist.entropy(union_of(groups, static_cast<Subset>(s)) | side);
    return out;
}

std::vector<double> factor_product(const std::vector<int>& cards, const std::vector<FactorLayout>& factors) {
    long long cells = 1;
    for (int c : cards) cells *= c;
    std::vector<double> out(cells);
#pragma omp parallel
    {
        std::vector<int> digit(cards.size());
#pragma omp for schedule(static)
        for (long long cell = 0; cell < cells; ++cell) out[cell] = cell_product(cell, cards, factors, digit);
    }
    return out;
}

std::optional<Violation> submodular_scan(const std::vector<double>& f, int n, double tol) {
    const long long N = 1LL << n;
    long long first = std::numeric_limits<long long>::max();
#pragma omp parallel for schedule(dynamic, 16) reduction(min : first)
    for (long long a = 0; a < N; ++a)
        if (a < first && scan_row(f, n, static_cast<Subset>(a), tol)) first = a;
    if (first == std::numeric_limits<long long>::max()) return std::nullopt;
    return scan_row(f, n, static_cast<Subset>(first), tol);
}

std::vector<double> map_indices(std::size_t n, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(n);
    const long long m = static_cast<long long>(n);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < m; ++i) {
        try {
            out[i] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(swnet_map_error)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace omp

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace swnet::kernels
