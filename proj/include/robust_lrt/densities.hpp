#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "robust_lrt/numerics.hpp"

namespace robust_lrt {

// Clutter (H0) intensity model: Rayleigh with scale sigma0.
struct RayleighParams {
    double sigma0 = 0.0;

    void validate() const;
};

// Target (H1) intensity model: K-component Gaussian mixture.
struct GaussianMixtureParams {
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> sigmas;

    std::size_t components() const { return weights.size(); }
    void validate() const;
};

struct NominalModel {
    RayleighParams h0;
    GaussianMixtureParams h1;

    void validate() const { h0.validate(); h1.validate(); }
};

// Fitted values reported for the clutter/target training images.
NominalModel reference_model();

// (x / s^2) exp(-x^2 / (2 s^2)); throws domain_error for x < 0.
double rayleigh_pdf(const RayleighParams& params, double x);
double rayleigh_cdf(const RayleighParams& params, double x);

double gmm_pdf(const GaussianMixtureParams& params, double x);
double gmm_cdf(const GaussianMixtureParams& params, double x);
double gmm_log_likelihood(const GaussianMixtureParams& params, std::span<const double> samples);

// Rayleigh maximum-likelihood estimate sqrt(sum x^2 / 2N).
RayleighParams fit_rayleigh(std::span<const double> samples);

struct EmOptions {
    int restarts = 10;
    int max_iterations = 500;
    double tolerance = 1e-8;        // on mean log-likelihood gain
    double sigma_floor = 1e-6;      // a component below this has collapsed
};

// Per-restart record of the mean log-likelihood after every EM iteration.
struct EmTrace {
    std::vector<std::vector<double>> log_likelihood;
    int collapsed_restarts = 0;
    int best_restart = -1;
};

// Maximum-likelihood mixture by EM with D^2-sampled (k-means++) centers.
// The best of `restarts` non-collapsed runs is returned; components are
// sorted by mean. Deterministic for a given seed.
GaussianMixtureParams fit_gmm(std::span<const double> samples, std::size_t components, std::uint64_t seed,
                              const EmOptions& options = {}, EmTrace* trace = nullptr);

// Pointwise evaluation on the grid, without renormalization.
DensityGrid to_grid(const RayleighParams& params, const IntensityGrid& grid);
DensityGrid to_grid(const GaussianMixtureParams& params, const IntensityGrid& grid);

// Analytic probability mass that falls outside [grid.lo(), grid.hi()].
double truncated_mass(const RayleighParams& params, const IntensityGrid& grid);
double truncated_mass(const GaussianMixtureParams& params, const IntensityGrid& grid);

} // namespace robust_lrt
