#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "robust_lrt/raster.hpp"

namespace robust_lrt {

struct SeedPoint {
    std::size_t i = 0;   // column
    std::size_t j = 0;   // row
};

struct GrowOptions {
    double band_db = 3.0;
    double db_scale = 20.0;   // 20 for amplitudes, 10 for powers
};

// Union over seeds of the 8-connected regions reachable from each seed
// through pixels y with |db_scale * log10(y / phi)| <= band_db, phi being
// that seed's own intensity.
BinaryMask region_grow(const Raster& raster, std::span<const SeedPoint> seeds, const GrowOptions& options = {});

struct TrainingSets {
    std::vector<double> targets;
    std::vector<double> clutter;
};

// Positive pixels under the mask go to targets, the rest to clutter.
// Throws training_error if either set ends up empty.
TrainingSets split_training(const Raster& raster, const BinaryMask& mask);

} // namespace robust_lrt
