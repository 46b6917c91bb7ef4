#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "robust_lrt/densities.hpp"
#include "robust_lrt/raster.hpp"

namespace robust_lrt {

// Clutter strength per area. MIXED splits the columns into four equal
// strips alternating low, high, low, high.
enum class ClutterLayout { low, high, mixed };

ClutterLayout clutter_layout_from_string(std::string_view s);
std::string_view to_string(ClutterLayout layout);

struct TargetDisc {
    std::size_t i = 0;     // center column
    std::size_t j = 0;     // center row
    double radius = 0.0;   // pixel (di, dj) is inside when di^2 + dj^2 <= radius^2
};

// Nine discs on a 3x3 lattice over the given image size.
std::vector<TargetDisc> default_targets(std::size_t width, std::size_t height, double radius = 9.5);

struct SceneSpec {
    std::size_t width = 1153;
    std::size_t height = 721;
    int views = 11;
    ClutterLayout layout = ClutterLayout::low;
    double low_sigma0 = 0.025;
    double high_factor = 1.8;
    std::vector<TargetDisc> targets = default_targets(1153, 721);
    GaussianMixtureParams target_model = reference_model().h1;
    std::uint64_t seed = 1;

    void validate() const;
};

// Rayleigh scale of the clutter at column i.
double clutter_sigma(const SceneSpec& spec, std::size_t i);

BinaryMask truth_mask(const SceneSpec& spec);

struct Scene {
    std::vector<Raster> views;
    BinaryMask truth;
};

// Independent views: clutter pixels iid Rayleigh, disc pixels iid from the
// target mixture, everything clipped to [0, 1]. View v draws from the
// stream Random::derive(seed, v).
Scene generate(const SceneSpec& spec);

} // namespace robust_lrt
