#include "robust_lrt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robust_lrt/error.hpp"
#include "robust_lrt/random.hpp"

namespace robust_lrt {

ClutterLayout clutter_layout_from_string(std::string_view s) {
    if (s == "low") return ClutterLayout::low;
    if (s == "high") return ClutterLayout::high;
    if (s == "mixed") return ClutterLayout::mixed;
    throw input_error("clutter layout must be low, high or mixed");
}

std::string_view to_string(ClutterLayout layout) {
    switch (layout) {
    case ClutterLayout::low: return "low";
    case ClutterLayout::high: return "high";
    case ClutterLayout::mixed: return "mixed";
    }
    return "low";
}

std::vector<TargetDisc> default_targets(std::size_t width, std::size_t height, double radius) {
    std::vector<TargetDisc> out;
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            out.push_back({(2 * c + 1) * width / 6, (2 * r + 1) * height / 6, radius});
        }
    }
    return out;
}

void SceneSpec::validate() const {
    if (width == 0 || height == 0) throw input_error("scene dimensions must be positive");
    if (views < 1) throw input_error("scene needs at least one view");
    if (!(low_sigma0 > 0) || !(high_factor > 0)) throw input_error("clutter scales must be positive");
    target_model.validate();
    for (std::size_t a = 0; a < targets.size(); ++a) {
        const auto& t = targets[a];
        if (!(t.radius >= 0)) throw input_error("target radius must be non-negative");
        const auto reach = static_cast<std::size_t>(std::floor(t.radius));
        if (t.i < reach || t.j < reach || t.i + reach >= width || t.j + reach >= height) {
            std::ostringstream msg;
            msg << "target " << a + 1 << " at (" << t.i << ", " << t.j << ") radius " << t.radius
                << " leaves the image";
            throw input_error(msg.str());
        }
        for (std::size_t b = 0; b < a; ++b) {
            const double di = static_cast<double>(t.i) - static_cast<double>(targets[b].i);
            const double dj = static_cast<double>(t.j) - static_cast<double>(targets[b].j);
            if (std::hypot(di, dj) <= t.radius + targets[b].radius) {
                std::ostringstream msg;
                msg << "targets " << b + 1 << " and " << a + 1 << " overlap";
                throw input_error(msg.str());
            }
        }
    }
}

double clutter_sigma(const SceneSpec& spec, std::size_t i) {
    switch (spec.layout) {
    case ClutterLayout::low: return spec.low_sigma0;
    case ClutterLayout::high: return spec.low_sigma0 * spec.high_factor;
    case ClutterLayout::mixed: {
        const auto strip = 4 * i / spec.width;
        return strip % 2 == 0 ? spec.low_sigma0 : spec.low_sigma0 * spec.high_factor;
    }
    }
    return spec.low_sigma0;
}

BinaryMask truth_mask(const SceneSpec& spec) {
    spec.validate();
    BinaryMask mask(spec.width, spec.height);
    for (const auto& t: spec.targets) {
        const auto reach = static_cast<long>(std::floor(t.radius));
        const double r2 = t.radius * t.radius;
        for (long dj = -reach; dj <= reach; ++dj) {
            for (long di = -reach; di <= reach; ++di) {
                if (static_cast<double>(di * di + dj * dj) <= r2) {
                    mask.at(static_cast<std::size_t>(static_cast<long>(t.i) + di),
                            static_cast<std::size_t>(static_cast<long>(t.j) + dj)) = 1;
                }
            }
        }
    }
    return mask;
}

Scene generate(const SceneSpec& spec) {
    Scene scene;
    scene.truth = truth_mask(spec);

    const auto& gmm = spec.target_model;
    std::vector<double> cumulative(gmm.components());
    double acc = 0.0;
    for (std::size_t k = 0; k < gmm.components(); ++k) cumulative[k] = acc += gmm.weights[k];

    std::vector<double> column_sigma(spec.width);
    for (std::size_t i = 0; i < spec.width; ++i) column_sigma[i] = clutter_sigma(spec, i);

    for (int v = 0; v < spec.views; ++v) {
        Random rng(Random::derive(spec.seed, static_cast<std::uint64_t>(v)));
        Raster view(spec.width, spec.height);
        for (std::size_t j = 0; j < spec.height; ++j) {
            for (std::size_t i = 0; i < spec.width; ++i) {
                double x;
                if (scene.truth.at(i, j)) {
                    const double u = rng.uniform() * acc;
                    auto k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                                      cumulative.begin());
                    k = std::min(k, gmm.components() - 1);
                    x = rng.normal(gmm.means[k], gmm.sigmas[k]);
                }
                else {
                    x = rng.rayleigh(column_sigma[i]);
                }
                view.at(i, j) = static_cast<float>(std::clamp(x, 0.0, 1.0));
            }
        }
        scene.views.push_back(std::move(view));
    }
    return scene;
}

} // namespace robust_lrt
