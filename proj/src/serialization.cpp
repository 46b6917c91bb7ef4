#include "robust_lrt/serialization.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "robust_lrt/error.hpp"

namespace robust_lrt {

namespace {

template <typename T>
T field(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw input_error(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    }
    catch (const json::exception&) {
        throw input_error(std::string("field '") + key + "' has the wrong type");
    }
}

template <typename T>
T field_or(const json& doc, const char* key, T fallback) {
    if (!doc.is_object() || !doc.contains(key)) return fallback;
    return field<T>(doc, key);
}

// Non-finite doubles serialize as strings so the JSON stays valid.
json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

} // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path.string());
    try {
        return json::parse(in);
    }
    catch (const json::parse_error& e) {
        throw input_error(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw input_error("cannot write " + path.string());
    out << std::setw(2) << doc << '\n';
}

json to_json(const NominalModel& model) {
    return {
        {"h0", {{"sigma0", model.h0.sigma0}}},
        {"h1", {{"weights", model.h1.weights}, {"means", model.h1.means}, {"sigmas", model.h1.sigmas}}},
    };
}

NominalModel model_from_json(const json& doc) {
    NominalModel m;
    const auto h0 = field<json>(doc, "h0");
    const auto h1 = field<json>(doc, "h1");
    m.h0.sigma0 = field<double>(h0, "sigma0");
    m.h1.weights = field<std::vector<double>>(h1, "weights");
    m.h1.means = field<std::vector<double>>(h1, "means");
    m.h1.sigmas = field<std::vector<double>>(h1, "sigmas");
    m.validate();
    return m;
}

json to_json(const BandSpec& spec) {
    json doc = {{"kind", std::string(to_string(spec.kind))}, {"lower_factor", spec.lower_factor}};
    if (spec.upper_factor) doc["upper_factor"] = *spec.upper_factor;
    else doc["upper_factor"] = "unbounded";
    return doc;
}

BandSpec band_spec_from_json(const json& doc) {
    const auto kind = field<std::string>(doc, "kind");
    BandSpec spec;
    if (kind == "outlier") {
        if (doc.contains("epsilon")) spec = BandSpec::outlier(field<double>(doc, "epsilon"));
        else spec = {BandKind::outlier, field<double>(doc, "lower_factor"), std::nullopt};
        if (doc.contains("upper_factor") && doc.at("upper_factor") != "unbounded") {
            throw input_error("outlier band must have an unbounded upper_factor");
        }
    }
    else if (kind == "band") {
        spec.kind = BandKind::band;
        spec.lower_factor = field_or<double>(doc, "lower_factor", 0.8);
        if (doc.contains("upper_factor") && doc.at("upper_factor").is_string()) {
            if (doc.at("upper_factor") != "unbounded") throw input_error("upper_factor must be a number or 'unbounded'");
            spec.upper_factor.reset();
        }
        else {
            spec.upper_factor = field_or<double>(doc, "upper_factor", 2.5);
        }
    }
    else {
        throw input_error("band kind must be 'band' or 'outlier'");
    }
    spec.validate();
    return spec;
}

json to_json(const IntensityGrid& grid) {
    return {{"n_points", grid.size()}, {"lo", grid.lo()}, {"hi", grid.hi()}};
}

IntensityGrid grid_from_json(const json& doc) {
    const auto n = field<long long>(doc, "n_points");
    if (n < 2) throw grid_error("grid needs at least two points");
    return IntensityGrid(static_cast<std::size_t>(n), field<double>(doc, "lo"), field<double>(doc, "hi"));
}

json to_json(const LfdPair& pair) {
    const auto v0 = pair.g0.values();
    const auto v1 = pair.g1.values();
    return {
        {"a0", pair.a0},
        {"a1", pair.a1},
        {"iterations", pair.iterations},
        {"converged", pair.converged},
        {"grid", to_json(pair.g0.grid())},
        {"g0_values", std::vector<double>(v0.begin(), v0.end())},
        {"g1_values", std::vector<double>(v1.begin(), v1.end())},
    };
}

LfdPair lfd_from_json(const json& doc) {
    const auto grid = grid_from_json(field<json>(doc, "grid"));
    auto v0 = field<std::vector<double>>(doc, "g0_values");
    auto v1 = field<std::vector<double>>(doc, "g1_values");
    if (v0.size() != grid.size() || v1.size() != grid.size()) throw grid_error("LFD value arrays do not match grid");
    return {
        DensityGrid(grid, std::move(v0)),
        DensityGrid(grid, std::move(v1)),
        field<double>(doc, "a0"),
        field<double>(doc, "a1"),
        field<int>(doc, "iterations"),
        field_or<bool>(doc, "converged", true),
    };
}

json report_to_json(const EvaluationReport& report, double alpha, double ln_gamma, CountUnit unit) {
    json targets = json::array();
    for (const auto& t: report.per_target) targets.push_back({{"id", t.id}, {"detected", t.detected}});
    return {
        {"alpha", alpha},
        {"ln_gamma", number(ln_gamma)},
        {"count_unit", std::string(to_string(unit))},
        {"fa_count", report.fa_count},
        {"md_count", report.md_count},
        {"per_target", targets},
    };
}

std::vector<SeedPoint> seeds_from_json(const json& doc) {
    const json list = doc.is_array() ? doc : field<json>(doc, "seeds");
    if (!list.is_array()) throw input_error("seeds must be an array");
    std::vector<SeedPoint> out;
    for (const auto& s: list) {
        const auto i = field<long long>(s, "i");
        const auto j = field<long long>(s, "j");
        if (i < 0 || j < 0) throw seed_error("seed coordinates must be non-negative");
        out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    }
    return out;
}

json to_json(const SceneSpec& spec) {
    json targets = json::array();
    for (const auto& t: spec.targets) targets.push_back({{"i", t.i}, {"j", t.j}, {"radius", t.radius}});
    return {
        {"width", spec.width},
        {"height", spec.height},
        {"views", spec.views},
        {"layout", std::string(to_string(spec.layout))},
        {"low_sigma0", spec.low_sigma0},
        {"high_factor", spec.high_factor},
        {"targets", targets},
        {"target_model",
         {{"weights", spec.target_model.weights},
          {"means", spec.target_model.means},
          {"sigmas", spec.target_model.sigmas}}},
        {"seed", spec.seed},
    };
}

SceneSpec scene_spec_from_json(const json& doc) {
    SceneSpec spec;
    const auto w = field_or<long long>(doc, "width", 1153);
    const auto h = field_or<long long>(doc, "height", 721);
    if (w <= 0 || h <= 0) throw input_error("scene dimensions must be positive");
    spec.width = static_cast<std::size_t>(w);
    spec.height = static_cast<std::size_t>(h);
    spec.views = field_or<int>(doc, "views", spec.views);
    spec.layout = clutter_layout_from_string(field_or<std::string>(doc, "layout", "low"));
    spec.low_sigma0 = field_or<double>(doc, "low_sigma0", spec.low_sigma0);
    spec.high_factor = field_or<double>(doc, "high_factor", spec.high_factor);
    spec.seed = field_or<std::uint64_t>(doc, "seed", spec.seed);
    if (doc.contains("targets")) {
        spec.targets.clear();
        for (const auto& t: field<json>(doc, "targets")) {
            const auto i = field<long long>(t, "i");
            const auto j = field<long long>(t, "j");
            if (i < 0 || j < 0) throw input_error("target centers must be non-negative");
            spec.targets.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                    field_or<double>(t, "radius", 9.5)});
        }
    }
    else {
        spec.targets = default_targets(spec.width, spec.height);
    }
    if (doc.contains("target_model")) {
        const auto m = field<json>(doc, "target_model");
        spec.target_model.weights = field<std::vector<double>>(m, "weights");
        spec.target_model.means = field<std::vector<double>>(m, "means");
        spec.target_model.sigmas = field<std::vector<double>>(m, "sigmas");
    }
    spec.validate();
    return spec;
}

void write_log_lr_csv(const std::filesystem::path& path, const LogLrFunction& lr) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw input_error("cannot write " + path.string());
    out.precision(17);
    out << "x,log_lr,case\n";
    for (std::size_t i = 0; i < lr.grid().size(); ++i) {
        out << lr.grid().at(i) << ',' << lr.values()[i] << ',' << to_string(lr.cases()[i]) << '\n';
    }
}

} // namespace robust_lrt
