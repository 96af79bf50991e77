#pragma once

#include <string>
#include <vector>

#include "swnet/feasibility.hpp"
#include "swnet/gaussian.hpp"
#include "swnet/mlsw.hpp"

namespace swnet {

// Random instances for randomized verification and tests.

// Joint over X1..Xn, Y1..Yn (binary unless card given), Dirichlet(1) over cells.
JointDistribution random_two_component_joint(int n, Rng& rng, int card = 2);
MlswContext two_component_context(const JointDistribution& joint, int n);

// Entropy function of a random joint plus a concave-of-modular term.
SetFunction random_submodular(int n, Rng& rng);
// Integer-valued: sums of capped cardinalities plus an integer modular term.
SetFunction random_integer_submodular(int n, Rng& rng);

// Binary discrete network, random channel rows; sources get a random joint pmf.
NetworkSpec random_discrete_network(int V, Subset sources, Subset destinations, Rng& rng);
AuxSpec random_aux(const NetworkSpec& net, Rng& rng, int q_card = 1, int yhat_card = 2);
NetworkSpec random_ff_network(int V, int q, Rng& rng);
// Gains i.i.d. standard complex normal, unit noise.
NetworkSpec random_gaussian_network(int V, Rng& rng);

struct TrialResult {
    std::size_t trial = 0;
    bool pass = false;
    std::string detail;
};

struct SkippedCase {
    std::size_t trial = 0;
    std::string partition, cut, reason;
};

struct VerifyReport {
    std::string kind;
    int ground = 0, trials = 0, samples = 0;
    std::uint64_t seed = 0;
    std::vector<TrialResult> results;
    std::vector<SkippedCase> skipped;
    std::size_t failures() const;
    bool pass() const { return failures() == 0; }
};

VerifyReport verify_identity(int V, int trials, int samples, std::uint64_t seed, double tol = kDefaultTol);
VerifyReport verify_lemma2(int V, int trials, int samples, std::uint64_t seed, double tol = kDefaultTol);
VerifyReport verify_lemma3(int V, int trials, int samples, std::uint64_t seed, double tol = kDefaultTol);
VerifyReport verify_claim3(int V, int trials, int samples, std::uint64_t seed, double tol = kDefaultTol);

}  // namespace swnet
