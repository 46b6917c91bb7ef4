#include "robust_lrt/lfd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "robust_lrt/error.hpp"
#include "robust_lrt/log.hpp"

namespace robust_lrt {

namespace {

double clamp_point(double a, double g, double lower, const double* upper) {
    const double v = std::max(a * g, lower);
    return upper ? std::min(*upper, v) : v;
}

} // namespace

double density_criterion(double a, const DensityGrid& g, const DensityBand& band) {
    require_same_grid(g, band.lower());
    const auto& grid = g.grid();
    const auto lower = band.lower().values();
    const double* upper = band.upper() ? band.upper()->values().data() : nullptr;
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        sum += grid.weight(i) * clamp_point(a, g[i], lower[i], upper ? upper + i : nullptr);
    }
    return sum - 1.0;
}

DensityGrid clamp_to_band(double a, const DensityGrid& g, const DensityBand& band) {
    require_same_grid(g, band.lower());
    const auto lower = band.lower().values();
    const double* upper = band.upper() ? band.upper()->values().data() : nullptr;
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out[i] = clamp_point(a, g[i], lower[i], upper ? upper + i : nullptr);
    }
    return DensityGrid(g.grid(), std::move(out));
}

double solve_multiplier(const DensityGrid& g, const DensityBand& band, double tol) {
    auto f = [&](double a) { return density_criterion(a, g, band); };
    double hi = 4.0;
    constexpr double max_hi = 0x1.0p60;
    while (f(hi) < -tol) {
        if (hi >= max_hi) {
            std::ostringstream msg;
            msg << "no root of the density criterion below 2^60 (f = " << f(hi) << ")";
            throw bracket_error(msg.str());
        }
        hi *= 2.0;
    }
    return bisect_root(f, 0.0, hi, {tol, 200});
}

LfdPair lfd_sweep(const DensityGrid& g0, const DensityGrid& g1, const DensityBand& band0, const DensityBand& band1,
                  double root_tol)
{
    const double a0 = solve_multiplier(g1, band0, root_tol);
    auto next0 = clamp_to_band(a0, g1, band0);
    const double a1 = solve_multiplier(next0, band1, root_tol);
    auto next1 = clamp_to_band(a1, next0, band1);
    (void)g0;
    return {std::move(next0), std::move(next1), a0, a1, 1, false};
}

LfdPair solve_lfds(const DensityBand& band0, const DensityBand& band1, const DensityGrid& init0,
                   const DensityGrid& init1, const LfdOptions& options)
{
    if (!(options.delta > 0)) throw input_error("LFD tolerance delta must be positive");
    require_same_grid(band0.lower(), band1.lower());
    require_same_grid(init0, band0.lower());
    require_same_grid(init1, band1.lower());

    DensityGrid g0 = init0;
    DensityGrid g1 = init1;
    double change0 = 0.0, change1 = 0.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        auto next = lfd_sweep(g0, g1, band0, band1, options.root_tol);
        change0 = l1_distance(g0, next.g0);
        change1 = l1_distance(g1, next.g1);
        g0 = std::move(next.g0);
        g1 = std::move(next.g1);
        if (change0 < options.delta && change1 < options.delta) {
            return {std::move(g0), std::move(g1), next.a0, next.a1, it, true};
        }
    }
    std::ostringstream msg;
    msg << "LFD iteration did not converge in " << options.max_iterations << " sweeps (last L1 changes "
        << change0 << ", " << change1 << ", delta " << options.delta << ")";
    throw convergence_error(msg.str());
}

std::string_view to_string(LrCase c) {
    switch (c) {
    case LrCase::ratio_ll: return "ratio_ll";
    case LrCase::ratio_lu: return "ratio_lu";
    case LrCase::ratio_ul: return "ratio_ul";
    case LrCase::ratio_uu: return "ratio_uu";
    case LrCase::clip_a1: return "clip_a1";
    case LrCase::clip_inv_a0: return "clip_inv_a0";
    case LrCase::undefined: return "undefined";
    }
    return "undefined";
}

LrCase lr_case_from_string(std::string_view s) {
    for (auto c: {LrCase::ratio_ll, LrCase::ratio_lu, LrCase::ratio_ul, LrCase::ratio_uu, LrCase::clip_a1,
                  LrCase::clip_inv_a0, LrCase::undefined}) {
        if (to_string(c) == s) return c;
    }
    throw input_error("unknown likelihood-ratio case label: " + std::string(s));
}

LogLrFunction::LogLrFunction(IntensityGrid grid, std::vector<double> values, std::vector<LrCase> cases):
    grid_(grid), values_(std::move(values)), cases_(std::move(cases))
{
    if (values_.size() != grid_.size() || cases_.size() != grid_.size()) {
        throw grid_error("log-LR table length does not match its grid");
    }
}

double LogLrFunction::in_cell(std::size_t cell, double s) const {
    const double a = values_[cell];
    const double b = values_[cell + 1];
    if (std::isfinite(a) && std::isfinite(b)) return a + s * (b - a);
    if (std::isnan(a)) return b;
    if (std::isnan(b)) return a;
    return s < 0.5 ? a : b;
}

double LogLrFunction::at(double x) const {
    const auto [cell, frac] = grid_.locate(x);
    return in_cell(cell, frac);
}

namespace {

enum class Side { lower, upper, interior };

Side side_of(double g, double lower, const double* upper) {
    if (upper && g == *upper) return Side::upper;
    if (g == lower) return Side::lower;
    return Side::interior;
}

} // namespace

LogLrFunction robust_log_lr(const LfdPair& pair, const DensityBand& band0, const DensityBand& band1) {
    if (!pair.converged) throw numeric_error("robust log-LR needs a converged LFD pair");
    require_same_grid(pair.g0, band0.lower());
    require_same_grid(pair.g1, band1.lower());
    const auto n = pair.g0.size();
    const double ln_a1 = std::log(pair.a1);
    const double minus_ln_a0 = -std::log(pair.a0);

    std::vector<double> values(n);
    std::vector<LrCase> cases(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g0 = pair.g0[i];
        const double g1 = pair.g1[i];
        if (g0 == 0 && g1 == 0) {
            values[i] = std::numeric_limits<double>::quiet_NaN();
            cases[i] = LrCase::undefined;
            continue;
        }
        const double* up0 = band0.upper() ? band0.upper()->values().data() + i : nullptr;
        const double* up1 = band1.upper() ? band1.upper()->values().data() + i : nullptr;
        const Side s0 = side_of(g0, band0.lower()[i], up0);
        const Side s1 = side_of(g1, band1.lower()[i], up1);

        if (s1 == Side::interior) {
            cases[i] = LrCase::clip_a1;
            values[i] = ln_a1;
        }
        else if (s0 == Side::interior) {
            cases[i] = LrCase::clip_inv_a0;
            values[i] = minus_ln_a0;
        }
        else {
            const bool g1_low = s1 == Side::lower;
            const bool g0_low = s0 == Side::lower;
            cases[i] = g1_low ? (g0_low ? LrCase::ratio_ll : LrCase::ratio_lu)
                              : (g0_low ? LrCase::ratio_ul : LrCase::ratio_uu);
            values[i] = std::log(g1) - std::log(g0);
        }
    }
    return LogLrFunction(pair.g0.grid(), std::move(values), std::move(cases));
}

LogLrFunction nominal_log_lr(const DensityGrid& p0, const DensityGrid& p1) {
    require_same_grid(p0, p1);
    const auto n = p0.size();
    std::vector<double> values(n);
    std::vector<LrCase> cases(n, LrCase::ratio_ll);
    for (std::size_t i = 0; i < n; ++i) {
        if (p0[i] == 0 && p1[i] == 0) {
            values[i] = std::numeric_limits<double>::quiet_NaN();
            cases[i] = LrCase::undefined;
        }
        else {
            values[i] = std::log(p1[i]) - std::log(p0[i]);
        }
    }
    return LogLrFunction(p0.grid(), std::move(values), std::move(cases));
}

std::optional<Interval> label_support(const LogLrFunction& f, LrCase label, double lo, double hi) {
    std::optional<Interval> out;
    for (std::size_t i = 0; i < f.grid().size(); ++i) {
        const double x = f.grid().at(i);
        if (x < lo || x > hi || f.cases()[i] != label) continue;
        if (!out) out = Interval{x, x};
        else out->hi = x;
    }
    return out;
}

} // namespace robust_lrt
