#pragma once

#include <span>
#include <vector>

#include "splatlab/core/splat.hpp"
#include "splatlab/ingest/json.hpp"
#include "splatlab/stats/gmm.hpp"

namespace splatlab::stats {

struct Histogram {
    std::vector<double> edges;         // bins + 1 entries
    std::vector<std::int64_t> counts;  // per-bin; outliers clamp to edge bins

    ingest::Json to_json() const;
};

// Percentile with linear interpolation between order statistics (p in [0,100]).
double percentile(std::span<const double> values, double p);
double median(std::span<const double> values);

// Fixed-width histogram; every sample lands in a bin (values outside
// [lo, hi] count into the first / last bin).
Histogram build_histogram(std::span<const double> values, int bins, double lo,
                          double hi);

enum class ModalityVerdict { unimodal, bimodal, multimodal };

const char* to_string(ModalityVerdict v);

struct BimodalityReport {
    int selected_k = 0;
    double ashman_d = 0.0;               // from the k=2 fit
    std::vector<double> mode_locations;  // component means of the selected fit
    ModalityVerdict verdict = ModalityVerdict::unimodal;
};

// verdict = bimodal iff selected_k == 2 and ashman_d > 2; >= 3 components
// selected means multimodal.
BimodalityReport classify_modality(const KSelection& sel);

struct DistributionReport {
    std::string kind;           // "scale_spectrum" | "radiance"
    std::size_t n_primitives = 0;
    std::size_t n_samples = 0;  // pooled values analyzed
    KSelection selection;
    BimodalityReport bimodality;
    Histogram histogram;

    ingest::Json to_json() const;
};

// Pools the log covariance eigenvalues (three per primitive) and
// characterizes their distribution. Needs >= 100 primitives.
DistributionReport scale_spectrum_report(
    std::span<const GaussianPrimitive> primitives, std::uint64_t seed,
    int k_max = 4, int restarts = 3);

// Pools per-primitive channel-mean DC radiance and tests for bimodality.
DistributionReport radiance_report(std::span<const GaussianPrimitive> primitives,
                                   std::uint64_t seed, int k_max = 3,
                                   int restarts = 3);

}  // namespace splatlab::stats
