#include "splatlab/stats/gmm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "splatlab/core/rng.hpp"

namespace splatlab::stats {

namespace {

constexpr double kLogLikTol = 1e-8;
constexpr int kMaxIterations = 500;
constexpr double kLog2Pi = 1.8378770664093453;

double sample_mean(std::span<const double> s) {
    return std::accumulate(s.begin(), s.end(), 0.0) / double(s.size());
}

double sample_variance(std::span<const double> s, double mean) {
    double acc = 0.0;
    for (double x : s) acc += (x - mean) * (x - mean);
    return acc / double(s.size());
}

// k-means++ style seeding on sorted samples: squared-distance-weighted draws.
std::vector<double> seed_means(const std::vector<double>& sorted, int k, Rng& rng) {
    std::vector<double> centers;
    centers.reserve(k);
    centers.push_back(sorted[rng.uniform_index(sorted.size())]);
    std::vector<double> d2(sorted.size());
    while (int(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c : centers)
                best = std::min(best, (sorted[i] - c) * (sorted[i] - c));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // All remaining mass sits on chosen centers; spread deterministically.
            centers.push_back(sorted[rng.uniform_index(sorted.size())]);
            continue;
        }
        double u = rng.uniform() * total;
        std::size_t pick = sorted.size() - 1;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            u -= d2[i];
            if (u <= 0.0) {
                pick = i;
                break;
            }
        }
        centers.push_back(sorted[pick]);
    }
    return centers;
}

}  // namespace

GmmFit fit_gmm_1d(std::span<const double> samples, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("fit_gmm_1d: k must be >= 1");
    const std::size_t n = samples.size();
    if (n < std::size_t(2 * k))
        throw TooFewSamplesError("fit_gmm_1d: need at least 2k samples, have " +
                                 std::to_string(n) + " for k=" + std::to_string(k));
    for (double x : samples)
        if (!std::isfinite(x))
            throw std::invalid_argument("fit_gmm_1d: non-finite sample");

    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const bool all_identical = *mn == *mx;
    if (all_identical && k >= 2)
        throw DegenerateDataError("fit_gmm_1d: all samples identical, k >= 2");

    const double mean = sample_mean(samples);
    const double var = sample_variance(samples, mean);
    double floor = 1e-8 * var;
    if (floor <= 0.0) floor = 1e-12 * std::max(1.0, mean * mean);

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    Rng rng(seed);
    GmmFit fit;
    fit.k = k;
    fit.means = seed_means(sorted, k, rng);
    std::sort(fit.means.begin(), fit.means.end());
    fit.weights.assign(k, 1.0 / k);
    fit.variances.assign(k, std::max(var > 0.0 ? var : 1.0, floor));

    std::vector<double> resp(n * std::size_t(k));
    double prev_ll = -std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        // E-step with log-sum-exp.
        double ll = 0.0;
        std::vector<double> log_w(k), log_v(k);
        for (int j = 0; j < k; ++j) {
            log_w[j] = std::log(std::max(fit.weights[j], 1e-300));
            log_v[j] = std::log(fit.variances[j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double best = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < k; ++j) {
                const double d = samples[i] - fit.means[j];
                const double lp = log_w[j] - 0.5 * (kLog2Pi + log_v[j] +
                                                    d * d / fit.variances[j]);
                resp[i * k + j] = lp;
                best = std::max(best, lp);
            }
            double denom = 0.0;
            for (int j = 0; j < k; ++j) denom += std::exp(resp[i * k + j] - best);
            const double log_denom = best + std::log(denom);
            ll += log_denom;
            for (int j = 0; j < k; ++j)
                resp[i * k + j] = std::exp(resp[i * k + j] - log_denom);
        }

        // EM is monotone up to roundoff.
        assert(ll >= prev_ll - 1e-9 * std::max(1.0, std::fabs(prev_ll)));
        fit.ll_trace.push_back(ll);
        fit.log_likelihood = ll;
        fit.iterations = iter;
        if (ll - prev_ll < kLogLikTol && iter > 1) {
            fit.converged = true;
            break;
        }
        prev_ll = ll;

        // M-step.
        for (int j = 0; j < k; ++j) {
            double nj = 0.0, sx = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                nj += resp[i * k + j];
                sx += resp[i * k + j] * samples[i];
            }
            if (nj < 1e-12) {
                // Dead component: keep its parameters, zero its weight.
                fit.weights[j] = 1e-12;
                continue;
            }
            const double mu = sx / nj;
            double sv = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = samples[i] - mu;
                sv += resp[i * k + j] * d * d;
            }
            fit.weights[j] = nj / double(n);
            fit.means[j] = mu;
            fit.variances[j] = std::max(sv / nj, floor);
        }
        // Renormalize in case a component died.
        const double wsum =
            std::accumulate(fit.weights.begin(), fit.weights.end(), 0.0);
        for (double& w : fit.weights) w /= wsum;
    }
    return fit;
}

const GmmFit& KSelection::best_fit() const {
    for (const auto& e : entries)
        if (!e.skipped && e.k == best_k) return e.fit;
    throw std::logic_error("KSelection: no usable fit");
}

const KSelectionEntry* KSelection::entry_for(int k) const {
    for (const auto& e : entries)
        if (e.k == k) return &e;
    return nullptr;
}

KSelection select_k_bic(std::span<const double> samples, int k_max,
                        int restarts, std::uint64_t seed) {
    if (k_max < 1) throw std::invalid_argument("select_k_bic: k_max must be >= 1");
    if (restarts < 1) throw std::invalid_argument("select_k_bic: restarts must be >= 1");
    const double n = double(samples.size());

    KSelection sel;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        KSelectionEntry entry;
        entry.k = k;
        bool have = false;
        for (int r = 0; r < restarts; ++r) {
            try {
                GmmFit f = fit_gmm_1d(samples, k,
                                      derive_seed(seed, std::uint64_t(k) << 32 | r));
                if (!have || f.log_likelihood > entry.fit.log_likelihood) {
                    entry.fit = std::move(f);
                    have = true;
                }
            } catch (const TooFewSamplesError& e) {
                entry.skipped = true;
                entry.skip_reason = e.what();
                break;
            } catch (const DegenerateDataError& e) {
                entry.skipped = true;
                entry.skip_reason = e.what();
                break;
            }
        }
        if (have) {
            entry.skipped = false;
            entry.skip_reason.clear();
            entry.bic = -2.0 * entry.fit.log_likelihood +
                        (3.0 * k - 1.0) * std::log(n);
            if (entry.bic < best_bic) {
                best_bic = entry.bic;
                sel.best_k = k;
            }
        }
        sel.entries.push_back(std::move(entry));
    }
    if (sel.best_k == 0)
        throw TooFewSamplesError("select_k_bic: no k admitted a fit");
    return sel;
}

double ashman_d(double mean1, double var1, double mean2, double var2) {
    const double denom = std::sqrt(var1 + var2);
    if (denom == 0.0) return 0.0;
    return std::sqrt(2.0) * std::fabs(mean1 - mean2) / denom;
}

}  // namespace splatlab::stats
