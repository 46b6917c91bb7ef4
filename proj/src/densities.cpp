#include "robust_lrt/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "robust_lrt/error.hpp"
#include "robust_lrt/random.hpp"

namespace robust_lrt {

namespace {

double normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

} // namespace

void RayleighParams::validate() const {
    if (!(sigma0 > 0) || !std::isfinite(sigma0)) throw input_error("Rayleigh sigma0 must be positive and finite");
}

void GaussianMixtureParams::validate() const {
    const auto k = weights.size();
    if (k == 0) throw input_error("mixture needs at least one component");
    if (means.size() != k || sigmas.size() != k) throw input_error("mixture weights/means/sigmas lengths differ");
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(weights[i] > 0) || !std::isfinite(weights[i])) throw input_error("mixture weights must be positive");
        if (!std::isfinite(means[i])) throw input_error("mixture means must be finite");
        if (!(sigmas[i] > 0) || !std::isfinite(sigmas[i])) throw input_error("mixture sigmas must be positive");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw input_error("mixture weights must sum to one");
}

NominalModel reference_model() {
    NominalModel m;
    m.h0.sigma0 = 0.025;
    // The published weights sum to 0.999; rescale them onto the simplex.
    const double total = 0.601 + 0.212 + 0.186;
    m.h1.weights = {0.601 / total, 0.212 / total, 0.186 / total};
    m.h1.means = {0.117, 0.430, 0.833};
    m.h1.sigmas = {0.050, 0.048, 0.088};
    return m;
}

double rayleigh_pdf(const RayleighParams& params, double x) {
    if (x < 0) throw domain_error("Rayleigh density evaluated at negative intensity");
    const double s2 = params.sigma0 * params.sigma0;
    return x / s2 * std::exp(-x * x / (2.0 * s2));
}

double rayleigh_cdf(const RayleighParams& params, double x) {
    if (x <= 0) return 0.0;
    const double s2 = params.sigma0 * params.sigma0;
    return -std::expm1(-x * x / (2.0 * s2));
}

double gmm_pdf(const GaussianMixtureParams& params, double x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < params.components(); ++k) {
        sum += params.weights[k] * normal_pdf(x, params.means[k], params.sigmas[k]);
    }
    return sum;
}

double gmm_cdf(const GaussianMixtureParams& params, double x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < params.components(); ++k) {
        sum += params.weights[k] * normal_cdf(x, params.means[k], params.sigmas[k]);
    }
    return sum;
}

double gmm_log_likelihood(const GaussianMixtureParams& params, std::span<const double> samples) {
    double ll = 0.0;
    for (double x: samples) ll += std::log(gmm_pdf(params, x));
    return ll;
}

RayleighParams fit_rayleigh(std::span<const double> samples) {
    if (samples.size() < 2) throw fit_error("Rayleigh fit needs at least 2 samples");
    double sum_sq = 0.0;
    for (double x: samples) {
        if (!(x > 0) || !std::isfinite(x)) throw fit_error("Rayleigh fit needs strictly positive finite samples");
        sum_sq += x * x;
    }
    return {std::sqrt(sum_sq / (2.0 * static_cast<double>(samples.size())))};
}

namespace {

struct EmRun {
    GaussianMixtureParams params;
    double log_likelihood = -std::numeric_limits<double>::infinity();
    bool collapsed = false;
};

void sort_by_mean(GaussianMixtureParams& p) {
    std::vector<std::size_t> order(p.components());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return p.means[a] < p.means[b]; });
    GaussianMixtureParams sorted;
    for (auto i: order) {
        sorted.weights.push_back(p.weights[i]);
        sorted.means.push_back(p.means[i]);
        sorted.sigmas.push_back(p.sigmas[i]);
    }
    p = std::move(sorted);
}

// k-means++ seeding followed by one hard assignment to get starting moments.
GaussianMixtureParams initialize(std::span<const double> xs, std::size_t k, Random& rng, double global_sd) {
    const auto n = xs.size();
    std::vector<double> centers{xs[rng.below(n)]};
    std::vector<double> d2(n);
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c: centers) best = std::min(best, (xs[i] - c) * (xs[i] - c));
            d2[i] = best;
            total += best;
        }
        if (!(total > 0)) {
            centers.push_back(xs[rng.below(n)]);
            continue;
        }
        double target = rng.uniform() * total;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            target -= d2[i];
            if (target < 0) { pick = i; break; }
        }
        centers.push_back(xs[pick]);
    }

    std::vector<double> count(k, 0.0), sum(k, 0.0), sum_sq(k, 0.0);
    for (double x: xs) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < k; ++c) {
            if (std::abs(x - centers[c]) < std::abs(x - centers[best])) best = c;
        }
        count[best] += 1;
        sum[best] += x;
        sum_sq[best] += x * x;
    }

    GaussianMixtureParams p;
    const double fallback_sd = global_sd / static_cast<double>(k);
    for (std::size_t c = 0; c < k; ++c) {
        if (count[c] < 2) {
            p.weights.push_back(std::max(count[c], 1.0) / static_cast<double>(n));
            p.means.push_back(centers[c]);
            p.sigmas.push_back(fallback_sd);
            continue;
        }
        const double mean = sum[c] / count[c];
        const double var = std::max(0.0, sum_sq[c] / count[c] - mean * mean);
        p.weights.push_back(count[c] / static_cast<double>(n));
        p.means.push_back(mean);
        p.sigmas.push_back(var > 0 ? std::sqrt(var) : fallback_sd);
    }
    const double wsum = std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
    for (double& w: p.weights) w /= wsum;
    return p;
}

EmRun run_em(std::span<const double> xs, GaussianMixtureParams p, const EmOptions& options,
             std::vector<double>& trace)
{
    const auto n = xs.size();
    const auto k = p.components();
    std::vector<double> resp(n * k);
    std::vector<double> log_comp(k);
    double previous = -std::numeric_limits<double>::infinity();
    EmRun run;

    for (int it = 0; it < options.max_iterations; ++it) {
        // E-step in log space; also yields the likelihood of the current parameters.
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double z = (xs[i] - p.means[c]) / p.sigmas[c];
                log_comp[c] = std::log(p.weights[c]) - std::log(p.sigmas[c]) - 0.5 * z * z
                    - 0.5 * std::log(2.0 * std::numbers::pi);
                top = std::max(top, log_comp[c]);
            }
            double s = 0.0;
            for (std::size_t c = 0; c < k; ++c) s += std::exp(log_comp[c] - top);
            const double log_norm = top + std::log(s);
            ll += log_norm;
            for (std::size_t c = 0; c < k; ++c) resp[i * k + c] = std::exp(log_comp[c] - log_norm);
        }
        ll /= static_cast<double>(n);
        trace.push_back(ll);
        run.params = p;
        run.log_likelihood = ll;
        if (ll - previous < options.tolerance) break;
        previous = ll;

        // M-step.
        for (std::size_t c = 0; c < k; ++c) {
            double nk = 0.0, mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                nk += resp[i * k + c];
                mean += resp[i * k + c] * xs[i];
            }
            if (!(nk > 0)) {
                run.collapsed = true;
                return run;
            }
            mean /= nk;
            double var = 0.0;
            for (std::size_t i = 0; i < n; ++i) var += resp[i * k + c] * (xs[i] - mean) * (xs[i] - mean);
            const double sd = std::sqrt(var / nk);
            if (!(sd >= options.sigma_floor)) {
                run.collapsed = true;
                return run;
            }
            p.weights[c] = nk / static_cast<double>(n);
            p.means[c] = mean;
            p.sigmas[c] = sd;
        }
    }
    return run;
}

} // namespace

GaussianMixtureParams fit_gmm(std::span<const double> samples, std::size_t components, std::uint64_t seed,
                              const EmOptions& options, EmTrace* trace)
{
    if (components == 0) throw fit_error("mixture fit needs at least one component");
    if (samples.size() < 10 * components) throw fit_error("mixture fit needs at least 10 samples per component");
    double sum = 0.0, sum_sq = 0.0;
    for (double x: samples) {
        if (!std::isfinite(x)) throw fit_error("mixture fit got a non-finite sample");
        sum += x;
        sum_sq += x * x;
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    const double global_sd = std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
    if (!(global_sd >= options.sigma_floor)) throw fit_error("mixture fit got (near) constant samples");

    if (components == 1) {
        double var = 0.0;
        for (double x: samples) var += (x - mean) * (x - mean);
        GaussianMixtureParams p{{1.0}, {mean}, {std::sqrt(var / n)}};
        if (trace) {
            trace->log_likelihood = {{gmm_log_likelihood(p, samples) / n}};
            trace->best_restart = 0;
        }
        return p;
    }

    EmRun best;
    int best_restart = -1;
    int collapsed = 0;
    std::vector<std::vector<double>> traces;
    for (int r = 0; r < std::max(1, options.restarts); ++r) {
        Random rng(Random::derive(seed, static_cast<std::uint64_t>(r)));
        auto start = initialize(samples, components, rng, global_sd);
        std::vector<double> run_trace;
        auto run = run_em(samples, std::move(start), options, run_trace);
        traces.push_back(std::move(run_trace));
        if (run.collapsed) {
            ++collapsed;
            continue;
        }
        if (best_restart < 0 || run.log_likelihood > best.log_likelihood) {
            best = std::move(run);
            best_restart = r;
        }
    }
    if (trace) {
        trace->log_likelihood = std::move(traces);
        trace->collapsed_restarts = collapsed;
        trace->best_restart = best_restart;
    }
    if (best_restart < 0) throw fit_error("every EM restart collapsed a component");
    sort_by_mean(best.params);
    return best.params;
}

DensityGrid to_grid(const RayleighParams& params, const IntensityGrid& grid) {
    params.validate();
    return DensityGrid::tabulate(grid, [&](double x) { return x < 0 ? 0.0 : rayleigh_pdf(params, x); });
}

DensityGrid to_grid(const GaussianMixtureParams& params, const IntensityGrid& grid) {
    params.validate();
    return DensityGrid::tabulate(grid, [&](double x) { return gmm_pdf(params, x); });
}

double truncated_mass(const RayleighParams& params, const IntensityGrid& grid) {
    return rayleigh_cdf(params, grid.lo()) + (1.0 - rayleigh_cdf(params, grid.hi()));
}

double truncated_mass(const GaussianMixtureParams& params, const IntensityGrid& grid) {
    return gmm_cdf(params, grid.lo()) + (1.0 - gmm_cdf(params, grid.hi()));
}

} // namespace robust_lrt
