#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "robust_lrt/densities.hpp"
#include "robust_lrt/detector.hpp"
#include "robust_lrt/error.hpp"
#include "robust_lrt/lfd.hpp"
#include "robust_lrt/log.hpp"
#include "robust_lrt/raster_io.hpp"
#include "robust_lrt/serialization.hpp"
#include "robust_lrt/synth.hpp"
#include "robust_lrt/training.hpp"
#include "robust_lrt/uncertainty.hpp"

namespace robust_lrt::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t grid_points = default_grid_points;
    double alpha = 0.05;
    std::string count_unit = "region";
    CLI::Option* seed_opt = nullptr;
    CLI::Option* grid_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* unit_opt = nullptr;
};

// Run-time view of the config file merged with command-line flags. Paths
// inside the config resolve against the config file's directory.
class RunConfig {
public:
    explicit RunConfig(const Globals& g): globals_(g) {
        if (!g.config_path.empty()) {
            doc_ = read_json_file(g.config_path);
            if (!doc_.is_object()) throw input_error("config must be a JSON object");
            base_ = fs::path(g.config_path).parent_path();
        }
        else {
            doc_ = json::object();
        }
    }

    const json& doc() const { return doc_; }

    json section(const char* name) const {
        if (!doc_.contains(name)) return json::object();
        const auto& s = doc_.at(name);
        if (!s.is_object()) throw input_error(std::string("config section '") + name + "' must be an object");
        return s;
    }

    fs::path path_in(const json& section, const char* key) const {
        if (!section.contains(key)) return {};
        if (!section.at(key).is_string()) throw input_error(std::string("'") + key + "' must be a path string");
        return resolve(section.at(key).get<std::string>());
    }

    fs::path resolve(const fs::path& p) const { return p.is_absolute() || base_.empty() ? p : base_ / p; }

    std::uint64_t seed() const {
        if (globals_.seed_opt->count()) return globals_.seed;
        return number_or<std::uint64_t>("seed", 1);
    }

    IntensityGrid grid() const {
        const auto n = globals_.grid_opt->count() ? globals_.grid_points
                                                  : number_or<std::size_t>("grid_points", default_grid_points);
        if (n < 2) throw grid_error("grid needs at least two points");
        return IntensityGrid(n);
    }

    double alpha() const {
        const double a = globals_.alpha_opt->count() ? globals_.alpha : number_or<double>("alpha", 0.05);
        if (!(a > 0 && a <= 1)) throw input_error("alpha must lie in (0, 1]");
        return a;
    }

    double delta() const { return number_or<double>("delta", 1e-3); }

    // Renormalize gridded nominals over [0, 1] before building bands.
    bool normalize_nominals() const { return number_or<bool>("normalize_nominals", false); }

    CountUnit count_unit() const {
        if (globals_.unit_opt->count()) return count_unit_from_string(globals_.count_unit);
        if (doc_.contains("count_unit")) return count_unit_from_string(doc_.at("count_unit").get<std::string>());
        return CountUnit::region;
    }

    // Band spec from the config; absent or null means no uncertainty set.
    std::optional<BandSpec> band() const {
        if (!doc_.contains("band") || doc_.at("band").is_null()) return std::nullopt;
        return band_spec_from_json(doc_.at("band"));
    }

private:
    template <typename T>
    T number_or(const char* key, T fallback) const {
        if (!doc_.contains(key)) return fallback;
        try {
            return doc_.at(key).get<T>();
        }
        catch (const json::exception&) {
            throw input_error(std::string("config field '") + key + "' has the wrong type");
        }
    }

    const Globals& globals_;
    json doc_;
    fs::path base_;
};

fs::path pick(const std::string& flag, const RunConfig& cfg, const json& section, const char* key) {
    if (!flag.empty()) return flag;
    return cfg.path_in(section, key);
}

fs::path require(const fs::path& p, const char* what) {
    if (p.empty()) throw input_error(std::string("no ") + what + " given (flag or config)");
    return p;
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

NominalModel load_model(const fs::path& path) {
    return model_from_json(read_json_file(require(path, "model")));
}

void print_model(const NominalModel& m, std::size_t n_clutter, std::size_t n_target) {
    std::printf("H0 Rayleigh   sigma0 = %.4f   (%zu clutter pixels)\n", m.h0.sigma0, n_clutter);
    std::printf("H1 mixture    %zu components   (%zu target pixels)\n", m.h1.components(), n_target);
    std::printf("  %-4s %10s %10s %10s\n", "k", "weight", "mean", "sigma");
    for (std::size_t k = 0; k < m.h1.components(); ++k) {
        std::printf("  %-4zu %10.3f %10.3f %10.3f\n", k + 1, m.h1.weights[k], m.h1.means[k], m.h1.sigmas[k]);
    }
}

struct Bands {
    DensityBand band0;
    DensityBand band1;
};

Bands make_bands(const NominalModel& model, const BandSpec& spec, const IntensityGrid& grid, bool normalize) {
    auto p0 = to_grid(model.h0, grid);
    auto p1 = to_grid(model.h1, grid);
    if (normalize) {
        p0 = p0.normalized();
        p1 = p1.normalized();
    }
    return {build_band(p0, spec, Hypothesis::h0), build_band(p1, spec, Hypothesis::h1)};
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string clutter_csv, target_csv, raster, truth, seeds, output;
    std::size_t components = 0;
};

int cmd_fit(const RunConfig& cfg, const FitArgs& args) {
    const auto sec = cfg.section("fit");
    const auto clutter_csv = pick(args.clutter_csv, cfg, sec, "clutter_csv");
    const auto target_csv = pick(args.target_csv, cfg, sec, "target_csv");
    const auto raster_path = pick(args.raster, cfg, sec, "raster");
    const auto output = require(pick(args.output, cfg, sec, "output"), "output path");
    std::size_t k = args.components;
    if (k == 0) k = sec.value("components", std::size_t{3});
    if (k == 0) throw input_error("components must be positive");

    TrainingSets sets;
    if (!raster_path.empty()) {
        const auto raster = read_raster(raster_path);
        BinaryMask mask;
        const auto truth = pick(args.truth, cfg, sec, "truth");
        if (!truth.empty()) {
            mask = read_mask_pgm(truth);
        }
        else {
            std::vector<SeedPoint> seeds;
            if (!args.seeds.empty()) seeds = seeds_from_json(read_json_file(args.seeds));
            else if (sec.contains("seeds")) seeds = seeds_from_json(sec.at("seeds"));
            else throw input_error("raster training needs seeds or a truth mask");
            GrowOptions grow;
            grow.band_db = sec.value("band_db", grow.band_db);
            grow.db_scale = sec.value("db_scale", grow.db_scale);
            mask = region_grow(raster, seeds, grow);
        }
        sets = split_training(raster, mask);
    }
    else {
        sets.clutter = read_column_csv(require(clutter_csv, "clutter CSV"));
        sets.targets = read_column_csv(require(target_csv, "target CSV"));
        if (sets.clutter.empty()) throw training_error("training error: clutter set is empty");
        if (sets.targets.empty()) throw training_error("training error: target set is empty");
    }

    EmOptions em;
    em.restarts = sec.value("restarts", em.restarts);
    NominalModel model{fit_rayleigh(sets.clutter), fit_gmm(sets.targets, k, cfg.seed(), em)};
    ensure_parent(output);
    write_json_file(output, to_json(model));
    print_model(model, sets.clutter.size(), sets.targets.size());
    return 0;
}

// ---------------------------------------------------------------- lfd

struct LfdArgs {
    std::string model, output, csv;
};

int cmd_lfd(const RunConfig& cfg, const LfdArgs& args) {
    const auto sec = cfg.section("lfd");
    const auto model = load_model(args.model.empty() ? cfg.path_in(cfg.doc(), "model") : fs::path(args.model));
    const auto output = require(pick(args.output, cfg, sec, "output"), "output path");
    const auto csv = pick(args.csv, cfg, sec, "csv");
    const auto spec = cfg.band().value_or(BandSpec{});
    const auto grid = cfg.grid();

    const auto [band0, band1] = make_bands(model, spec, grid, cfg.normalize_nominals());
    LfdOptions opt;
    opt.delta = cfg.delta();
    const auto pair = solve_lfds(band0, band1, to_grid(model.h0, grid).normalized(),
                                 to_grid(model.h1, grid).normalized(), opt);
    const auto lr = robust_log_lr(pair, band0, band1);

    auto doc = to_json(pair);
    doc["model"] = to_json(model);
    doc["band"] = to_json(spec);
    doc["normalize_nominals"] = cfg.normalize_nominals();
    ensure_parent(output);
    write_json_file(output, doc);
    if (!csv.empty()) {
        ensure_parent(csv);
        write_log_lr_csv(csv, lr);
    }

    std::printf("ln a0 = %.4f   ln a1 = %.4f   (%d sweeps)\n", std::log(pair.a0), std::log(pair.a1), pair.iterations);
    for (auto c: {LrCase::clip_inv_a0, LrCase::clip_a1}) {
        if (auto s = label_support(lr, c)) {
            const double v = c == LrCase::clip_a1 ? std::log(pair.a1) : -std::log(pair.a0);
            std::printf("%-12s log-LR %+.4f on [%.4f, %.4f]\n", std::string(to_string(c)).c_str(), v, s->lo, s->hi);
        }
    }
    return 0;
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
    std::string model, lfd, truth, output_dir;
    std::vector<std::string> rasters;
};

struct Detector {
    LogLrFunction log_lr;
    DensityGrid h0;
};

Detector build_detector(const RunConfig& cfg, const fs::path& model_path, const fs::path& lfd_path) {
    if (!lfd_path.empty()) {
        const auto doc = read_json_file(lfd_path);
        auto pair = lfd_from_json(doc);
        if (!doc.contains("model") || !doc.contains("band")) throw input_error("LFD file lacks model/band records");
        const auto model = model_from_json(doc.at("model"));
        const auto spec = band_spec_from_json(doc.at("band"));
        const auto [band0, band1] = make_bands(model, spec, pair.g0.grid(), doc.value("normalize_nominals", false));
        auto lr = robust_log_lr(pair, band0, band1);
        return {std::move(lr), pair.g0};
    }
    const auto model = load_model(model_path);
    const auto grid = cfg.grid();
    const auto p0 = to_grid(model.h0, grid);
    const auto p1 = to_grid(model.h1, grid);
    if (auto spec = cfg.band()) {
        const auto [band0, band1] = make_bands(model, *spec, grid, cfg.normalize_nominals());
        LfdOptions opt;
        opt.delta = cfg.delta();
        auto pair = solve_lfds(band0, band1, p0.normalized(), p1.normalized(), opt);
        auto lr = robust_log_lr(pair, band0, band1);
        return {std::move(lr), pair.g0};
    }
    return {nominal_log_lr(p0, p1), p0.normalized()};
}

int cmd_detect(const RunConfig& cfg, const DetectArgs& args) {
    const auto sec = cfg.section("detect");
    const auto model_path = args.model.empty() ? cfg.path_in(cfg.doc(), "model") : fs::path(args.model);
    const auto lfd_path = pick(args.lfd, cfg, sec, "lfd");
    const auto truth_path = pick(args.truth, cfg, sec, "truth");
    const auto out_dir = require(pick(args.output_dir, cfg, sec, "output_dir"), "output directory");

    std::vector<fs::path> raster_paths(args.rasters.begin(), args.rasters.end());
    if (raster_paths.empty() && sec.contains("rasters")) {
        for (const auto& r: sec.at("rasters")) raster_paths.push_back(cfg.resolve(r.get<std::string>()));
    }
    if (raster_paths.empty()) throw input_error("no rasters given");

    auto det = build_detector(cfg, model_path, lfd_path);
    const double alpha = cfg.alpha();
    const auto spec = calibrate(std::move(det.log_lr), det.h0, alpha);

    std::vector<BinaryMask> masks;
    for (const auto& p: raster_paths) {
        const auto raster = read_raster(p);
        if (!masks.empty() && (raster.width != masks.front().width || raster.height != masks.front().height)) {
            throw input_error(p.string() + ": view dimensions differ from the first view");
        }
        masks.push_back(detect(raster, spec));
    }
    const auto fused = hard_fuse(masks);

    fs::create_directories(out_dir);
    for (std::size_t v = 0; v < masks.size(); ++v) {
        char name[64];
        std::snprintf(name, sizeof name, "mask_view_%02zu.pgm", v);
        write_mask_pgm(out_dir / name, masks[v]);
    }
    write_mask_pgm(out_dir / "fused.pgm", fused);

    json report;
    if (!truth_path.empty()) {
        const auto truth = read_mask_pgm(truth_path);
        report = report_to_json(evaluate(fused, truth, cfg.count_unit()), alpha, spec.ln_gamma, cfg.count_unit());
        std::printf("ln gamma = %.6f   FA = %ld   MD = %ld\n", spec.ln_gamma, report["fa_count"].get<long>(),
                    report["md_count"].get<long>());
    }
    else {
        report = {{"alpha", alpha}, {"ln_gamma", spec.ln_gamma}};
        std::printf("ln gamma = %.6f   fused detections = %zu pixels\n", spec.ln_gamma, fused.count());
    }
    report["views"] = masks.size();
    write_json_file(out_dir / "report.json", report);
    return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string output_dir, layout;
    int views = 0;
};

int cmd_synth(const RunConfig& cfg, const SynthArgs& args) {
    const auto sec = cfg.section("synth");
    auto spec = scene_spec_from_json(sec.value("scene", json::object()));
    spec.seed = cfg.seed();
    if (!args.layout.empty()) spec.layout = clutter_layout_from_string(args.layout);
    if (args.views > 0) spec.views = args.views;
    spec.validate();
    const auto out_dir = require(pick(args.output_dir, cfg, sec, "output_dir"), "output directory");

    const auto scene = generate(spec);
    fs::create_directories(out_dir);
    for (std::size_t v = 0; v < scene.views.size(); ++v) {
        char name[64];
        std::snprintf(name, sizeof name, "view_%02zu.rlrt", v);
        write_raster(out_dir / name, scene.views[v]);
    }
    write_mask_pgm(out_dir / "truth.pgm", scene.truth);
    write_json_file(out_dir / "scene.json", to_json(spec));
    std::printf("%zu views of %zux%zu (%s clutter), %zu target pixels\n", scene.views.size(), spec.width, spec.height,
                std::string(to_string(spec.layout)).c_str(), scene.truth.count());
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string mask, truth, output;
};

int cmd_evaluate(const RunConfig& cfg, const EvaluateArgs& args) {
    const auto sec = cfg.section("evaluate");
    const auto mask = read_mask_pgm(require(pick(args.mask, cfg, sec, "mask"), "mask"));
    const auto truth = read_mask_pgm(require(pick(args.truth, cfg, sec, "truth"), "truth mask"));
    const auto output = pick(args.output, cfg, sec, "output");
    const auto unit = cfg.count_unit();
    const auto report = evaluate(mask, truth, unit);

    json targets = json::array();
    for (const auto& t: report.per_target) targets.push_back({{"id", t.id}, {"detected", t.detected}});
    const json doc = {{"count_unit", std::string(to_string(unit))},
                      {"fa_count", report.fa_count},
                      {"md_count", report.md_count},
                      {"per_target", targets}};
    if (!output.empty()) {
        ensure_parent(output);
        write_json_file(output, doc);
    }
    std::printf("FA = %ld   MD = %ld   (%s count)\n", report.fa_count, report.md_count,
                std::string(to_string(unit)).c_str());
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Minimax robust likelihood-ratio detection", "robust-lrt"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "run-config JSON");
    g.seed_opt = app.add_option("--seed", g.seed, "64-bit seed");
    g.grid_opt = app.add_option("--grid-points", g.grid_points, "intensity grid size")->check(CLI::Range(2, 1 << 24));
    g.alpha_opt = app.add_option("--alpha", g.alpha, "target false-alarm rate");
    g.unit_opt = app.add_option("--count-unit", g.count_unit, "FA/MD counting unit")
                     ->check(CLI::IsMember({"region", "pixel"}));

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "fit nominal H0/H1 models");
    fit_cmd->add_option("--clutter-csv", fit.clutter_csv, "clutter intensities, one per line");
    fit_cmd->add_option("--target-csv", fit.target_csv, "target intensities, one per line");
    fit_cmd->add_option("--raster", fit.raster, "labeled training raster");
    fit_cmd->add_option("--truth", fit.truth, "target mask PGM for --raster");
    fit_cmd->add_option("--seeds", fit.seeds, "seed list JSON for region growing");
    fit_cmd->add_option("--components", fit.components, "mixture components");
    fit_cmd->add_option("-o,--output", fit.output, "model JSON");

    LfdArgs lfd;
    auto* lfd_cmd = app.add_subcommand("lfd", "solve least favorable densities");
    lfd_cmd->add_option("--model", lfd.model, "model JSON");
    lfd_cmd->add_option("-o,--output", lfd.output, "LFD JSON");
    lfd_cmd->add_option("--csv", lfd.csv, "x, log_lr, case table");

    DetectArgs det;
    auto* det_cmd = app.add_subcommand("detect", "calibrate, detect per view, fuse");
    det_cmd->add_option("--model", det.model, "model JSON (nominal or band from config)");
    det_cmd->add_option("--lfd", det.lfd, "LFD JSON written by the lfd command");
    det_cmd->add_option("--truth", det.truth, "truth mask PGM");
    det_cmd->add_option("-o,--output-dir", det.output_dir, "directory for masks and report");
    det_cmd->add_option("rasters", det.rasters, "view rasters");

    SynthArgs syn;
    auto* syn_cmd = app.add_subcommand("synth", "generate a synthetic multiview scene");
    syn_cmd->add_option("-o,--output-dir", syn.output_dir, "directory for views and truth");
    syn_cmd->add_option("--layout", syn.layout, "low, high or mixed");
    syn_cmd->add_option("--views", syn.views, "number of views");

    EvaluateArgs ev;
    auto* ev_cmd = app.add_subcommand("evaluate", "count false alarms and misses");
    ev_cmd->add_option("--mask", ev.mask, "detection mask PGM");
    ev_cmd->add_option("--truth", ev.truth, "truth mask PGM");
    ev_cmd->add_option("-o,--output", ev.output, "report JSON");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig cfg(g);
        if (*fit_cmd) return cmd_fit(cfg, fit);
        if (*lfd_cmd) return cmd_lfd(cfg, lfd);
        if (*det_cmd) return cmd_detect(cfg, det);
        if (*syn_cmd) return cmd_synth(cfg, syn);
        if (*ev_cmd) return cmd_evaluate(cfg, ev);
    }
    catch (const input_error& e) {
        log_message(log_level::error, e.what());
        return 2;
    }
    catch (const numeric_error& e) {
        log_message(log_level::error, e.what());
        return 3;
    }
    catch (const json::exception& e) {
        log_message(log_level::error, std::string("config: ") + e.what());
        return 2;
    }
    catch (const fs::filesystem_error& e) {
        log_message(log_level::error, e.what());
        return 2;
    }
    return 2;
}

} // namespace robust_lrt::cli
