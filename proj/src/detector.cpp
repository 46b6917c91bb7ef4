#include "robust_lrt/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "robust_lrt/error.hpp"

namespace robust_lrt {

namespace {

// Integral over s in [s1, s2] of the linear interpolant between ha and hb,
// times the cell width dx.
double cell_mass(double ha, double hb, double s1, double s2, double dx) {
    if (s2 <= s1) return 0.0;
    return dx * (ha * (s2 - s1) + 0.5 * (hb - ha) * (s2 * s2 - s1 * s1));
}

double mass_above(const LogLrFunction& lr, const DensityGrid& h0, double t) {
    const auto values = lr.values();
    const double dx = lr.grid().spacing();
    double sum = 0.0;
    for (std::size_t c = 0; c + 1 < values.size(); ++c) {
        const double a = values[c];
        const double b = values[c + 1];
        const double ha = h0[c];
        const double hb = h0[c + 1];
        if (std::isfinite(a) && std::isfinite(b)) {
            if (a == b) {
                if (a > t) sum += cell_mass(ha, hb, 0.0, 1.0, dx);
                continue;
            }
            const double s = std::clamp((t - a) / (b - a), 0.0, 1.0);
            sum += b > a ? cell_mass(ha, hb, s, 1.0, dx) : cell_mass(ha, hb, 0.0, s, dx);
            continue;
        }
        const double left = lr.in_cell(c, 0.0);
        const double right = lr.in_cell(c, 1.0);
        if (left > t) sum += cell_mass(ha, hb, 0.0, 0.5, dx);
        if (right > t) sum += cell_mass(ha, hb, 0.5, 1.0, dx);
    }
    return sum;
}

} // namespace

double false_alarm_mass(const LogLrFunction& log_lr, const DensityGrid& h0, double t) {
    if (!(log_lr.grid() == h0.grid())) throw grid_error("log-LR and H0 density live on different grids");
    const double total = quadrature(h0);
    if (!(total > 0)) throw calibration_error("H0 density has zero mass");
    return mass_above(log_lr, h0, t) / total;
}

double calibrate_threshold(const LogLrFunction& log_lr, const DensityGrid& h0, double alpha) {
    if (!(alpha > 0 && alpha <= 1)) throw input_error("alpha must lie in (0, 1]");
    if (!(log_lr.grid() == h0.grid())) throw grid_error("log-LR and H0 density live on different grids");
    const double total = quadrature(h0);
    if (!(total > 0)) throw calibration_error("H0 density has zero mass");
    auto fa = [&](double t) { return mass_above(log_lr, h0, t) / total; };

    std::vector<double> levels;
    for (double v: log_lr.values()) {
        if (std::isfinite(v)) levels.push_back(v);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.empty()) throw calibration_error("log-LR has no finite values");
    if (alpha == 1.0) return levels.front();

    if (fa(levels.back()) > alpha) {
        std::ostringstream msg;
        msg << "alpha " << alpha << " unreachable: H0 mass " << fa(levels.back()) << " lies at infinite log-LR";
        throw calibration_error(msg.str());
    }

    // First level j with fa(levels[j]) <= alpha; fa is non-increasing.
    std::size_t lo = 0, hi = levels.size() - 1;
    while (lo < hi) {
        const auto mid = lo + (hi - lo) / 2;
        if (fa(levels[mid]) <= alpha) hi = mid;
        else lo = mid + 1;
    }
    const std::size_t j = lo;
    if (j == 0) {
        if (alpha < 1 && fa(levels[0]) == 0.0) {
            std::ostringstream msg;
            msg << "alpha " << alpha << " unreachable: log-LR is constant at " << levels[0] << " under H0";
            throw calibration_error(msg.str());
        }
        return levels[0];
    }

    const double top = levels[j];
    double left = levels[j - 1];
    double right = std::nextafter(top, -std::numeric_limits<double>::infinity());
    if (fa(right) > alpha) return top;
    for (int it = 0; it < 200 && std::nextafter(left, right) < right; ++it) {
        const double mid = left + 0.5 * (right - left);
        if (fa(mid) <= alpha) right = mid;
        else left = mid;
    }
    return right;
}

DetectorSpec calibrate(LogLrFunction log_lr, const DensityGrid& h0, double alpha) {
    const double t = calibrate_threshold(log_lr, h0, alpha);
    return {std::move(log_lr), t, alpha};
}

BinaryMask detect(const Raster& raster, const DetectorSpec& spec) {
    if (raster.pixels.size() != raster.width * raster.height) throw input_error("raster size mismatch");
    BinaryMask mask(raster.width, raster.height);
    for (std::size_t p = 0; p < raster.size(); ++p) {
        const double x = raster.pixels[p];
        if (!(x >= 0.0 && x <= 1.0)) {
            std::ostringstream msg;
            msg << "pixel " << p << " has intensity " << x << " outside [0, 1]";
            throw input_error(msg.str());
        }
        if (x == 0.0) continue;
        mask.bits[p] = spec.log_lr.at(x) > spec.ln_gamma ? 1 : 0;
    }
    return mask;
}

BinaryMask hard_fuse(std::span<const BinaryMask> masks) {
    if (masks.empty()) throw input_error("hard fusion needs at least one mask");
    BinaryMask out = masks.front();
    for (const auto& m: masks.subspan(1)) {
        if (m.width != out.width || m.height != out.height) throw input_error("mask dimensions differ");
        for (std::size_t p = 0; p < out.size(); ++p) out.bits[p] = out.bits[p] && m.bits[p];
    }
    return out;
}

CountUnit count_unit_from_string(std::string_view s) {
    if (s == "region") return CountUnit::region;
    if (s == "pixel") return CountUnit::pixel;
    throw input_error("count unit must be 'region' or 'pixel'");
}

std::string_view to_string(CountUnit unit) {
    return unit == CountUnit::region ? "region" : "pixel";
}

EvaluationReport evaluate(const BinaryMask& fused, const BinaryMask& truth, CountUnit unit) {
    if (fused.width != truth.width || fused.height != truth.height) {
        throw input_error("detection mask and truth mask dimensions differ");
    }
    EvaluationReport report;
    const auto truth_cc = label_components(truth);
    std::vector<char> hit(truth_cc.count + 1, 0);
    for (std::size_t p = 0; p < fused.size(); ++p) {
        if (fused.bits[p] && truth_cc.labels[p]) hit[truth_cc.labels[p]] = 1;
    }
    for (int id = 1; id <= truth_cc.count; ++id) report.per_target.push_back({id, hit[id] != 0});

    if (unit == CountUnit::pixel) {
        for (std::size_t p = 0; p < fused.size(); ++p) {
            if (fused.bits[p] && !truth.bits[p]) ++report.fa_count;
            if (truth.bits[p] && !fused.bits[p]) ++report.md_count;
        }
        return report;
    }

    const auto fused_cc = label_components(fused);
    std::vector<char> touches(fused_cc.count + 1, 0);
    for (std::size_t p = 0; p < fused.size(); ++p) {
        if (fused_cc.labels[p] && truth.bits[p]) touches[fused_cc.labels[p]] = 1;
    }
    for (int id = 1; id <= fused_cc.count; ++id) report.fa_count += touches[id] ? 0 : 1;
    for (int id = 1; id <= truth_cc.count; ++id) report.md_count += hit[id] ? 0 : 1;
    return report;
}

} // namespace robust_lrt
