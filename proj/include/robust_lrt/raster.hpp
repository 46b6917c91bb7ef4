#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace robust_lrt {

// Row-major image. i indexes columns (0..width-1), j indexes rows.
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<float> pixels;

    Raster() = default;
    Raster(std::size_t w, std::size_t h, float fill = 0.0f): width(w), height(h), pixels(w * h, fill) {}

    std::size_t size() const { return pixels.size(); }
    float& at(std::size_t i, std::size_t j) { return pixels[j * width + i]; }
    float at(std::size_t i, std::size_t j) const { return pixels[j * width + i]; }
};

struct BinaryMask {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(std::size_t w, std::size_t h, std::uint8_t fill = 0): width(w), height(h), bits(w * h, fill) {}

    std::size_t size() const { return bits.size(); }
    std::uint8_t& at(std::size_t i, std::size_t j) { return bits[j * width + i]; }
    std::uint8_t at(std::size_t i, std::size_t j) const { return bits[j * width + i]; }
    std::size_t count() const;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

// 8-connected component labels (0 = background, 1..count).
struct Components {
    std::vector<std::int32_t> labels;
    std::int32_t count = 0;
};
Components label_components(const BinaryMask& mask);

} // namespace robust_lrt
