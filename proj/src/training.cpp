#include "robust_lrt/training.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "robust_lrt/error.hpp"

namespace robust_lrt {

BinaryMask region_grow(const Raster& raster, std::span<const SeedPoint> seeds, const GrowOptions& options) {
    if (!(options.band_db > 0)) throw input_error("region growing band_db must be positive");
    if (!(options.db_scale > 0)) throw input_error("region growing db_scale must be positive");
    BinaryMask out(raster.width, raster.height);
    std::vector<char> visited(raster.size());
    std::deque<std::size_t> queue;
    const auto w = static_cast<long>(raster.width);
    const auto h = static_cast<long>(raster.height);

    for (const auto& seed: seeds) {
        if (seed.i >= raster.width || seed.j >= raster.height) {
            std::ostringstream msg;
            msg << "seed (" << seed.i << ", " << seed.j << ") outside a " << raster.width << "x" << raster.height
                << " raster";
            throw seed_error(msg.str());
        }
        const double phi = raster.at(seed.i, seed.j);
        if (!(phi > 0)) {
            std::ostringstream msg;
            msg << "seed (" << seed.i << ", " << seed.j << ") has zero intensity; dB criterion undefined";
            throw seed_error(msg.str());
        }
        auto admits = [&](double y) {
            return y > 0 && std::abs(options.db_scale * std::log10(y / phi)) <= options.band_db;
        };

        std::fill(visited.begin(), visited.end(), 0);
        const auto start = seed.j * raster.width + seed.i;
        visited[start] = 1;
        queue.push_back(start);
        while (!queue.empty()) {
            const auto p = queue.front();
            queue.pop_front();
            out.bits[p] = 1;
            const long pi = static_cast<long>(p % raster.width);
            const long pj = static_cast<long>(p / raster.width);
            for (long dj = -1; dj <= 1; ++dj) {
                for (long di = -1; di <= 1; ++di) {
                    const long ni = pi + di, nj = pj + dj;
                    if (ni < 0 || nj < 0 || ni >= w || nj >= h) continue;
                    const auto q = static_cast<std::size_t>(nj * w + ni);
                    if (visited[q]) continue;
                    visited[q] = 1;
                    if (admits(raster.pixels[q])) queue.push_back(q);
                }
            }
        }
    }
    return out;
}

TrainingSets split_training(const Raster& raster, const BinaryMask& mask) {
    if (raster.width != mask.width || raster.height != mask.height) {
        throw input_error("training mask does not match raster dimensions");
    }
    TrainingSets sets;
    for (std::size_t p = 0; p < raster.size(); ++p) {
        const double x = raster.pixels[p];
        if (!(x > 0)) continue;
        (mask.bits[p] ? sets.targets : sets.clutter).push_back(x);
    }
    if (sets.targets.empty()) throw training_error("training error: no positive target pixels under the mask");
    if (sets.clutter.empty()) throw training_error("training error: no positive clutter pixels outside the mask");
    return sets;
}

} // namespace robust_lrt
