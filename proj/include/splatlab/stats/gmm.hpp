#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace splatlab::stats {

class TooFewSamplesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GmmFit {
    int k = 0;
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> variances;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> ll_trace;  // one entry per EM iteration
};

// EM for a 1-D Gaussian mixture. Initialization is k-means++ style on a
// sorted copy of the samples so the result is invariant to input
// permutation. Stops when the log-likelihood gain drops below 1e-8 or after
// 500 iterations. Component variances are floored at 1e-8 x sample variance.
GmmFit fit_gmm_1d(std::span<const double> samples, int k, std::uint64_t seed);

struct KSelectionEntry {
    int k = 0;
    bool skipped = false;
    std::string skip_reason;
    GmmFit fit;        // best of the restarts when not skipped
    double bic = 0.0;  // -2 logL + (3k - 1) ln n
};

struct KSelection {
    int best_k = 0;
    std::vector<KSelectionEntry> entries;  // one per k in 1..k_max

    const GmmFit& best_fit() const;
    const KSelectionEntry* entry_for(int k) const;
};

// Fits every k in 1..k_max (best of `restarts` seeded runs each) and picks
// the k minimizing BIC; ties go to the smaller k. Under-sampled or
// degenerate k values are skipped and noted.
KSelection select_k_bic(std::span<const double> samples, int k_max,
                        int restarts, std::uint64_t seed);

// Separation between two components: sqrt(2) |mu1 - mu2| / sqrt(s1^2 + s2^2).
double ashman_d(double mean1, double var1, double mean2, double var2);

}  // namespace splatlab::stats
