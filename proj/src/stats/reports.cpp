#include "splatlab/stats/reports.hpp"

#include <algorithm>
#include <cmath>

namespace splatlab::stats {

using ingest::Json;

double percentile(std::span<const double> values, double p) {
    if (values.empty())
        throw std::invalid_argument("percentile: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double rank = p / 100.0 * double(sorted.size() - 1);
    const std::size_t lo = std::size_t(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - double(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values) { return percentile(values, 50.0); }

Histogram build_histogram(std::span<const double> values, int bins, double lo,
                          double hi) {
    if (bins < 1) throw std::invalid_argument("build_histogram: bins < 1");
    if (!(hi > lo)) hi = lo + 1.0;  // degenerate range
    Histogram h;
    h.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[i] = lo + (hi - lo) * double(i) / double(bins);
    h.counts.assign(bins, 0);
    const double scale = double(bins) / (hi - lo);
    for (double v : values) {
        int b = int(std::floor((v - lo) * scale));
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[b];
    }
    return h;
}

Json Histogram::to_json() const {
    Json j = Json::object();
    j["edges"] = Json::array_of(edges);
    j["counts"] = Json::array_of(counts);
    return j;
}

const char* to_string(ModalityVerdict v) {
    switch (v) {
        case ModalityVerdict::unimodal: return "unimodal";
        case ModalityVerdict::bimodal: return "bimodal";
        case ModalityVerdict::multimodal: return "multimodal";
    }
    return "unimodal";
}

BimodalityReport classify_modality(const KSelection& sel) {
    BimodalityReport rep;
    rep.selected_k = sel.best_k;
    if (const KSelectionEntry* e2 = sel.entry_for(2); e2 && !e2->skipped)
        rep.ashman_d = ashman_d(e2->fit.means[0], e2->fit.variances[0],
                                e2->fit.means[1], e2->fit.variances[1]);
    rep.mode_locations = sel.best_fit().means;
    std::sort(rep.mode_locations.begin(), rep.mode_locations.end());
    if (sel.best_k >= 3)
        rep.verdict = ModalityVerdict::multimodal;
    else if (sel.best_k == 2 && rep.ashman_d > 2.0)
        rep.verdict = ModalityVerdict::bimodal;
    else
        rep.verdict = ModalityVerdict::unimodal;
    return rep;
}

namespace {

constexpr int kHistogramBins = 128;
constexpr std::size_t kMinPrimitives = 100;

DistributionReport characterize(std::string kind, std::size_t n_primitives,
                                std::vector<double> pooled, std::uint64_t seed,
                                int k_max, int restarts) {
    const auto [mn, mx] = std::minmax_element(pooled.begin(), pooled.end());
    if (*mn == *mx)
        throw DegenerateDataError(kind + ": all pooled values identical");

    DistributionReport rep;
    rep.kind = std::move(kind);
    rep.n_primitives = n_primitives;
    rep.n_samples = pooled.size();
    rep.selection = select_k_bic(pooled, k_max, restarts, seed);
    rep.bimodality = classify_modality(rep.selection);
    rep.histogram = build_histogram(pooled, kHistogramBins,
                                    percentile(pooled, 0.1),
                                    percentile(pooled, 99.9));
    return rep;
}

}  // namespace

Json DistributionReport::to_json() const {
    Json j = Json::object();
    j["kind"] = kind;
    j["n"] = n_samples;
    j["n_primitives"] = n_primitives;
    j["selected_k"] = bimodality.selected_k;
    j["ashman_d"] = bimodality.ashman_d;
    j["verdict"] = to_string(bimodality.verdict);
    Json comps = Json::array();
    const GmmFit& fit = selection.best_fit();
    for (int c = 0; c < fit.k; ++c) {
        Json comp = Json::object();
        comp["weight"] = fit.weights[c];
        comp["mean"] = fit.means[c];
        comp["variance"] = fit.variances[c];
        comps.push_back(std::move(comp));
    }
    j["components"] = std::move(comps);
    j["histogram"] = histogram.to_json();
    return j;
}

DistributionReport scale_spectrum_report(
    std::span<const GaussianPrimitive> primitives, std::uint64_t seed,
    int k_max, int restarts) {
    if (primitives.size() < kMinPrimitives)
        throw TooFewSamplesError("scale_spectrum_report: need >= 100 primitives");
    std::vector<double> pooled;
    pooled.reserve(primitives.size() * 3);
    for (const auto& p : primitives) {
        const auto ev = eigvals_sym3(covariance_of(p));
        for (double v : ev) pooled.push_back(std::log(v));
    }
    return characterize("scale_spectrum", primitives.size(), std::move(pooled),
                        seed, k_max, restarts);
}

DistributionReport radiance_report(std::span<const GaussianPrimitive> primitives,
                                   std::uint64_t seed, int k_max, int restarts) {
    if (primitives.size() < kMinPrimitives)
        throw TooFewSamplesError("radiance_report: need >= 100 primitives");
    std::vector<double> pooled;
    pooled.reserve(primitives.size());
    for (const auto& p : primitives) {
        const Vec3 r = radiance_dc(p.sh_dc);
        pooled.push_back((r.x + r.y + r.z) / 3.0);
    }
    return characterize("radiance", primitives.size(), std::move(pooled), seed,
                        k_max, restarts);
}

}  // namespace splatlab::stats
