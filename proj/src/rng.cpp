#include "swnet/common.hpp"

#include <algorithm>
#include <numeric>

namespace swnet {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

int Rng::below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(eng_); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

std::vector<double> Rng::dirichlet(std::size_t n, double alpha) {
    std::gamma_distribution<double> g(alpha, 1.0);
    std::vector<double> w(n);
    double s = 0;
    do {
        s = 0;
        for (auto& x : w) s += (x = g(eng_));
    } while (s <= 0);
    for (auto& x : w) x /= s;
    return w;
}

std::vector<int> Rng::permutation(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), eng_);
    return p;
}

Rng Rng::fork(std::uint64_t stream) const {
    std::uint64_t st = seed_ ^ (0xd1b54a32d192ed03ULL * (stream + 1));
    return Rng(splitmix64(st));
}

}  // namespace swnet
