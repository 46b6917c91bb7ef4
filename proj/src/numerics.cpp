#include "robust_lrt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robust_lrt/error.hpp"

namespace robust_lrt {

IntensityGrid::IntensityGrid(std::size_t n_points, double lo, double hi):
    n_points_(n_points), lo_(lo), hi_(hi)
{
    if (n_points < 2) throw grid_error("intensity grid needs at least 2 points");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw grid_error("intensity grid needs lo < hi");
    spacing_ = (hi - lo) / static_cast<double>(n_points - 1);
}

double IntensityGrid::at(std::size_t i) const {
    if (i + 1 == n_points_) return hi_;
    return lo_ + spacing_ * static_cast<double>(i);
}

std::vector<double> IntensityGrid::points() const {
    std::vector<double> xs(n_points_);
    for (std::size_t i = 0; i < n_points_; ++i) xs[i] = at(i);
    return xs;
}

double IntensityGrid::weight(std::size_t i) const {
    return (i == 0 || i + 1 == n_points_) ? 0.5 * spacing_ : spacing_;
}

IntensityGrid::Location IntensityGrid::locate(double x) const {
    if (!(x >= lo_ && x <= hi_)) {
        std::ostringstream msg;
        msg << "intensity " << x << " outside [" << lo_ << ", " << hi_ << "]";
        throw domain_error(msg.str());
    }
    const double t = (x - lo_) / spacing_;
    const auto last_cell = n_points_ - 2;
    auto cell = static_cast<std::size_t>(std::floor(t));
    if (cell > last_cell) cell = last_cell;
    const double frac = std::clamp(t - static_cast<double>(cell), 0.0, 1.0);
    return {cell, frac};
}

DensityGrid::DensityGrid(IntensityGrid grid, std::vector<double> values):
    grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size()) throw grid_error("density length does not match its grid");
    for (double v: values_) {
        if (!std::isfinite(v)) throw numeric_input_error("density value is not finite");
        if (v < 0) throw numeric_input_error("density value is negative");
    }
}

DensityGrid DensityGrid::tabulate(const IntensityGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid.at(i));
    return DensityGrid(grid, std::move(values));
}

DensityGrid DensityGrid::constant(const IntensityGrid& grid, double value) {
    return DensityGrid(grid, std::vector<double>(grid.size(), value));
}

DensityGrid DensityGrid::scaled(double c) const {
    std::vector<double> out(values_);
    for (double& v: out) v *= c;
    return DensityGrid(grid_, std::move(out));
}

DensityGrid DensityGrid::normalized() const {
    const double mass = quadrature(*this);
    if (!(mass > 0)) throw numeric_error("cannot normalize a density with zero mass");
    return scaled(1.0 / mass);
}

double DensityGrid::interpolate(double x) const {
    const auto [cell, frac] = grid_.locate(x);
    return values_[cell] + frac * (values_[cell + 1] - values_[cell]);
}

void require_same_grid(const DensityGrid& a, const DensityGrid& b) {
    if (!(a.grid() == b.grid())) throw grid_error("densities live on different grids");
}

double quadrature(const IntensityGrid& grid, std::span<const double> values) {
    if (values.size() != grid.size()) throw grid_error("value count does not match grid");
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw numeric_input_error("quadrature over a non-finite value");
        interior += values[i];
    }
    const double ends = values.front() + values.back();
    if (!std::isfinite(ends)) throw numeric_input_error("quadrature over a non-finite value");
    return grid.spacing() * (interior + 0.5 * ends);
}

double quadrature(const DensityGrid& d) {
    return quadrature(d.grid(), d.values());
}

double l1_distance(const DensityGrid& a, const DensityGrid& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a.grid().weight(i) * std::abs(a[i] - b[i]);
    return sum;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, BisectOptions options) {
    if (!(options.tol > 0)) throw numeric_error("bisection tolerance must be positive");
    if (!(lo <= hi)) throw bracket_error("bisection bracket is reversed");

    const double f_lo = f(lo);
    if (std::abs(f_lo) <= options.tol) return lo;
    if (f_lo > 0) throw bracket_error("bracket does not straddle zero: f(lo) > 0");
    const double f_hi = f(hi);
    if (f_hi < -options.tol) throw bracket_error("bracket does not straddle zero: f(hi) < 0");

    double left = lo;
    double right = hi;
    for (int it = 0; it < options.max_iterations; ++it) {
        if (right - left <= options.tol) return right;
        const double mid = left + 0.5 * (right - left);
        if (mid <= left || mid >= right) return right;   // bracket at double resolution
        if (f(mid) < 0) left = mid;
        else right = mid;
    }
    if (right - left <= options.tol) return right;
    throw convergence_error("bisection did not converge within the iteration budget");
}

GridSampler::GridSampler(const DensityGrid& density):
    grid_(density.grid()),
    values_(density.values().begin(), density.values().end()),
    cumulative_(grid_.size() - 1)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        total += 0.5 * grid_.spacing() * (values_[i] + values_[i + 1]);
        cumulative_[i] = total;
    }
    if (!(total > 0)) throw numeric_error("cannot sample from a density with zero mass");
}

double GridSampler::sample(double u_cell, double u_pos) const {
    const double target = u_cell * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) --it;
    const auto cell = static_cast<std::size_t>(it - cumulative_.begin());

    const double v0 = values_[cell];
    const double v1 = values_[cell + 1];
    const double mean = 0.5 * (v0 + v1);
    double t;
    if (u_pos <= 0) {
        t = 0.0;
    }
    else if (std::abs(v1 - v0) <= 1e-12 * mean) {
        t = u_pos;
    }
    else {
        // Solve (v1 - v0)/2 t^2 + v0 t = u mean for t in [0, 1].
        const double disc = std::max(0.0, v0 * v0 + 2.0 * (v1 - v0) * u_pos * mean);
        t = 2.0 * u_pos * mean / (v0 + std::sqrt(disc));
    }
    t = std::clamp(t, 0.0, 1.0);
    return std::min(grid_.hi(), grid_.at(cell) + t * grid_.spacing());
}

} // namespace robust_lrt
