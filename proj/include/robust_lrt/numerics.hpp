#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "robust_lrt/random.hpp"

namespace robust_lrt {

inline constexpr std::size_t default_grid_points = 4096;

// Uniformly spaced sample points over [lo, hi].
class IntensityGrid {
public:
    explicit IntensityGrid(std::size_t n_points = default_grid_points, double lo = 0.0, double hi = 1.0);

    std::size_t size() const { return n_points_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double spacing() const { return spacing_; }

    // i-th sample point; the last point is exactly hi.
    double at(std::size_t i) const;
    std::vector<double> points() const;

    // Composite trapezoid weights: spacing everywhere, spacing/2 at the ends.
    double weight(std::size_t i) const;

    // Cell containing x and the fractional offset inside it, for
    // lo <= x <= hi. The last point maps to the last cell with offset 1.
    struct Location {
        std::size_t cell;
        double frac;
    };
    Location locate(double x) const;

    friend bool operator==(const IntensityGrid&, const IntensityGrid&) = default;

private:
    std::size_t n_points_;
    double lo_;
    double hi_;
    double spacing_;
};

// A non-negative function sampled on an IntensityGrid (density per unit
// intensity). Not necessarily normalized.
class DensityGrid {
public:
    DensityGrid(IntensityGrid grid, std::vector<double> values);

    // Samples f at every grid point.
    static DensityGrid tabulate(const IntensityGrid& grid, const std::function<double(double)>& f);
    static DensityGrid constant(const IntensityGrid& grid, double value);

    const IntensityGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    DensityGrid scaled(double c) const;
    DensityGrid normalized() const;

    // Linear interpolation between grid points.
    double interpolate(double x) const;

private:
    IntensityGrid grid_;
    std::vector<double> values_;
};

// Throws grid_error unless a and b live on the same grid.
void require_same_grid(const DensityGrid& a, const DensityGrid& b);

// Composite trapezoid rule over [lo, hi]. Throws numeric_input_error on a
// non-finite value.
double quadrature(const DensityGrid& d);
double quadrature(const IntensityGrid& grid, std::span<const double> values);

// Spacing-weighted discrete L1 distance.
double l1_distance(const DensityGrid& a, const DensityGrid& b);

struct BisectOptions {
    double tol = 1e-12;
    int max_iterations = 200;
};

// Smallest root of a non-decreasing f on [lo, hi]. Requires f(lo) <= 0 <= f(hi)
// up to tol; returns lo when |f(lo)| <= tol. Otherwise bisects on the
// invariant f(left) < 0 <= f(right) until the bracket is narrower than tol,
// so flat zero segments resolve to their left end.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, BisectOptions options = {});

// Draws from the piecewise-linear interpolant of a DensityGrid by exact
// inverse-CDF sampling within each cell.
class GridSampler {
public:
    explicit GridSampler(const DensityGrid& density);

    double operator()(Random& rng) const { return sample(rng.uniform(), rng.uniform()); }

    // Maps a pair of uniforms onto a draw (cell choice, position in cell).
    double sample(double u_cell, double u_pos) const;

private:
    IntensityGrid grid_;
    std::vector<double> values_;
    std::vector<double> cumulative_;   // cell masses, cumulative
};

} // namespace robust_lrt
