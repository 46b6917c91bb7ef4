#pragma once

#include <optional>
#include <string_view>

#include "robust_lrt/numerics.hpp"

namespace robust_lrt {

enum class Hypothesis { h0, h1 };

enum class BandKind { band, outlier };

// How to widen a nominal density into an uncertainty set. An empty
// upper_factor means the upper envelope is unbounded.
struct BandSpec {
    BandKind kind = BandKind::band;
    double lower_factor = 0.8;
    std::optional<double> upper_factor = 2.5;

    static BandSpec band(double lower_factor, double upper_factor) {
        return {BandKind::band, lower_factor, upper_factor};
    }

    // epsilon-contamination: lower envelope (1 - epsilon) p, no upper envelope.
    static BandSpec outlier(double epsilon) { return {BandKind::outlier, 1.0 - epsilon, std::nullopt}; }

    double contamination() const { return 1.0 - lower_factor; }
    void validate() const;
};

// All densities q with lower <= q <= upper pointwise.
class DensityBand {
public:
    DensityBand(DensityGrid lower, std::optional<DensityGrid> upper, Hypothesis hypothesis);

    const DensityGrid& lower() const { return lower_; }
    const std::optional<DensityGrid>& upper() const { return upper_; }
    bool bounded() const { return upper_.has_value(); }
    Hypothesis hypothesis() const { return hypothesis_; }
    const IntensityGrid& grid() const { return lower_.grid(); }

private:
    DensityGrid lower_;
    std::optional<DensityGrid> upper_;
    Hypothesis hypothesis_;
};

// Nominal mass accepted for band construction (truncated tails allowed).
inline constexpr double min_nominal_mass = 0.95;

// Scales the nominal into (lower, upper) envelopes and enforces
// mass(lower) <= 1 <= mass(upper).
DensityBand build_band(const DensityGrid& nominal, const BandSpec& spec, Hypothesis hypothesis);

// Pointwise membership with a 1e-9 slack.
bool contains(const DensityBand& band, const DensityGrid& q);

std::string_view to_string(BandKind kind);

} // namespace robust_lrt
