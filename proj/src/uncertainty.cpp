#include "robust_lrt/uncertainty.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "robust_lrt/error.hpp"
#include "robust_lrt/log.hpp"

namespace robust_lrt {

namespace {
constexpr double feasibility_slack = 1e-9;
constexpr double membership_slack = 1e-9;
} // namespace

void BandSpec::validate() const {
    if (!(lower_factor > 0 && lower_factor <= 1)) throw input_error("band lower_factor must lie in (0, 1]");
    if (kind == BandKind::outlier) {
        if (upper_factor) throw input_error("outlier band must have an unbounded upper envelope");
        return;
    }
    if (upper_factor && !(*upper_factor >= 1 && std::isfinite(*upper_factor))) {
        throw input_error("band upper_factor must be >= 1");
    }
}

DensityBand::DensityBand(DensityGrid lower, std::optional<DensityGrid> upper, Hypothesis hypothesis):
    lower_(std::move(lower)), upper_(std::move(upper)), hypothesis_(hypothesis)
{
    if (upper_) {
        require_same_grid(lower_, *upper_);
        for (std::size_t i = 0; i < lower_.size(); ++i) {
            if (lower_[i] > (*upper_)[i]) throw infeasible_band_error("band lower envelope exceeds upper envelope");
        }
    }
    if (quadrature(lower_) > 1.0 + feasibility_slack) {
        throw infeasible_band_error("lower envelope integrates above one");
    }
    if (upper_ && quadrature(*upper_) < 1.0 - feasibility_slack) {
        throw infeasible_band_error("upper envelope integrates below one");
    }
}

DensityBand build_band(const DensityGrid& nominal, const BandSpec& spec, Hypothesis hypothesis) {
    spec.validate();
    const double mass = quadrature(nominal);
    if (mass < min_nominal_mass || mass > 1.0 + 1e-6) {
        std::ostringstream msg;
        msg << "nominal density mass " << mass << " outside [" << min_nominal_mass << ", 1]";
        throw input_error(msg.str());
    }
    if (mass < 1.0 - 1e-6) {
        log_message(log_level::warn, "nominal density truncated: mass on grid is " + std::to_string(mass));
    }
    if (spec.lower_factor * mass > 1.0 + feasibility_slack) {
        throw infeasible_band_error("lower_factor * mass(nominal) > 1");
    }
    std::optional<DensityGrid> upper;
    if (spec.upper_factor) {
        if (*spec.upper_factor * mass < 1.0 - feasibility_slack) {
            std::ostringstream msg;
            msg << "upper_factor * mass(nominal) = " << *spec.upper_factor * mass << " < 1";
            throw infeasible_band_error(msg.str());
        }
        upper = nominal.scaled(*spec.upper_factor);
    }
    return DensityBand(nominal.scaled(spec.lower_factor), std::move(upper), hypothesis);
}

bool contains(const DensityBand& band, const DensityGrid& q) {
    require_same_grid(band.lower(), q);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < band.lower()[i] - membership_slack) return false;
        if (band.upper() && q[i] > (*band.upper())[i] + membership_slack) return false;
    }
    return true;
}

std::string_view to_string(BandKind kind) {
    return kind == BandKind::band ? "band" : "outlier";
}

} // namespace robust_lrt
