#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "robust_lrt/numerics.hpp"
#include "robust_lrt/uncertainty.hpp"

namespace robust_lrt {

// f(a) = mass(min{upper, max{a g, lower}}) - 1, non-decreasing in a.
// An unbounded upper envelope drops the min.
double density_criterion(double a, const DensityGrid& g, const DensityBand& band);

// min{upper, max{a g, lower}} pointwise.
DensityGrid clamp_to_band(double a, const DensityGrid& g, const DensityBand& band);

// Smallest a >= 0 with density_criterion(a) = 0. The bracket starts at
// [0, 4] and doubles up to 2^60 before giving up with bracket_error.
double solve_multiplier(const DensityGrid& g, const DensityBand& band, double tol = 1e-13);

struct LfdOptions {
    double delta = 1e-3;          // L1 tolerance between successive iterates
    int max_iterations = 10000;
    double root_tol = 1e-13;
};

// Least favorable densities: g0 = min{p0'', max{a0 g1, p0'}} and
// g1 = min{p1'', max{a1 g0, p1'}}, each integrating to one.
struct LfdPair {
    DensityGrid g0;
    DensityGrid g1;
    double a0 = 0.0;
    double a1 = 0.0;
    int iterations = 0;
    bool converged = false;
};

// One alternating sweep: a0 from g1, then g0, then a1 from the new g0, then g1.
LfdPair lfd_sweep(const DensityGrid& g0, const DensityGrid& g1, const DensityBand& band0, const DensityBand& band1,
                  double root_tol = 1e-13);

// Iterates sweeps from (init0, init1) until both densities move by less than
// delta in L1. Returns the last iterate. Throws convergence_error when the
// iteration budget runs out.
LfdPair solve_lfds(const DensityBand& band0, const DensityBand& band1, const DensityGrid& init0,
                   const DensityGrid& init1, const LfdOptions& options = {});

// Six values the LFD likelihood ratio can take, plus a sentinel for points
// where both densities vanish. ratio_xy: g1 sits on envelope x of band1 and
// g0 on envelope y of band0 (l = lower, u = upper).
enum class LrCase : unsigned char {
    ratio_ll,
    ratio_lu,
    ratio_ul,
    ratio_uu,
    clip_a1,
    clip_inv_a0,
    undefined,
};

std::string_view to_string(LrCase c);
LrCase lr_case_from_string(std::string_view s);

// Log likelihood ratio sampled on a grid. Between two finite samples the
// function is linear; a cell with a non-finite end takes the value of the
// nearer end (NaN ends defer to the other end).
class LogLrFunction {
public:
    LogLrFunction(IntensityGrid grid, std::vector<double> values, std::vector<LrCase> cases);

    const IntensityGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<const LrCase> cases() const { return cases_; }

    double at(double x) const;

    // Value of cell `cell` at fraction s in [0, 1].
    double in_cell(std::size_t cell, double s) const;

private:
    IntensityGrid grid_;
    std::vector<double> values_;
    std::vector<LrCase> cases_;
};

// ln(g1/g0) with case labels; clip points carry ln a1 and -ln a0 exactly.
LogLrFunction robust_log_lr(const LfdPair& pair, const DensityBand& band0, const DensityBand& band1);

// ln(p1/p0) on the grid, labelled ratio_ll.
LogLrFunction nominal_log_lr(const DensityGrid& p0, const DensityGrid& p1);

// Range of grid points carrying `label` between lo and hi (inclusive);
// nullopt when none do.
struct Interval {
    double lo;
    double hi;
};
std::optional<Interval> label_support(const LogLrFunction& f, LrCase label, double lo = 0.0, double hi = 1.0);

} // namespace robust_lrt
