#include "robust_lrt/raster.hpp"

#include <algorithm>
#include <vector>

namespace robust_lrt {

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

Components label_components(const BinaryMask& mask) {
    Components out;
    out.labels.assign(mask.size(), 0);
    std::vector<std::size_t> stack;
    const auto w = static_cast<long>(mask.width);
    const auto h = static_cast<long>(mask.height);
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask.bits[start] || out.labels[start]) continue;
        const std::int32_t label = ++out.count;
        out.labels[start] = label;
        stack.push_back(start);
        while (!stack.empty()) {
            const auto p = stack.back();
            stack.pop_back();
            const long pi = static_cast<long>(p % mask.width);
            const long pj = static_cast<long>(p / mask.width);
            for (long dj = -1; dj <= 1; ++dj) {
                for (long di = -1; di <= 1; ++di) {
                    const long ni = pi + di, nj = pj + dj;
                    if (ni < 0 || nj < 0 || ni >= w || nj >= h) continue;
                    const auto q = static_cast<std::size_t>(nj * w + ni);
                    if (mask.bits[q] && !out.labels[q]) {
                        out.labels[q] = label;
                        stack.push_back(q);
                    }
                }
            }
        }
    }
    return out;
}

} // namespace robust_lrt
