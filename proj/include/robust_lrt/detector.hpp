#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "robust_lrt/lfd.hpp"
#include "robust_lrt/numerics.hpp"
#include "robust_lrt/raster.hpp"

namespace robust_lrt {

// Exact h0 mass (relative to h0's total) of {x : log_lr(x) > t}, with h0
// linear and log_lr evaluated per cell as in LogLrFunction::in_cell.
double false_alarm_mass(const LogLrFunction& log_lr, const DensityGrid& h0, double t);

// Smallest t with false_alarm_mass(t) <= alpha. A flat level that straddles
// alpha is excluded as a whole, so the result errs on the FA <= alpha side.
// alpha = 1 returns the smallest log-LR on the grid.
double calibrate_threshold(const LogLrFunction& log_lr, const DensityGrid& h0, double alpha);

struct DetectorSpec {
    LogLrFunction log_lr;
    double ln_gamma;
    double alpha;
};

DetectorSpec calibrate(LogLrFunction log_lr, const DensityGrid& h0, double alpha);

// bit = log_lr(x) > ln_gamma. Zero pixels carry no data and stay 0; pixels
// outside [0, 1] raise input_error.
BinaryMask detect(const Raster& raster, const DetectorSpec& spec);

// Pixelwise AND of all masks.
BinaryMask hard_fuse(std::span<const BinaryMask> masks);

enum class CountUnit { region, pixel };

CountUnit count_unit_from_string(std::string_view s);
std::string_view to_string(CountUnit unit);

struct TargetHit {
    int id;
    bool detected;
};

struct EvaluationReport {
    long fa_count = 0;
    long md_count = 0;
    std::vector<TargetHit> per_target;
};

// Region mode: 8-connected fused components touching no truth component are
// false alarms, truth components touching no fused bit are misses. Pixel
// mode counts fused-but-not-truth and truth-but-not-fused pixels instead.
// per_target always lists truth components in label order.
EvaluationReport evaluate(const BinaryMask& fused, const BinaryMask& truth, CountUnit unit = CountUnit::region);

} // namespace robust_lrt
