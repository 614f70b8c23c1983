#include "wander/cli.hpp"

#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>

#include "wander/approximation.hpp"
#include "wander/diff.hpp"
#include "wander/dynamics.hpp"
#include "wander/geometry.hpp"
#include "wander/orbits.hpp"
#include "wander/symbols.hpp"
#include "wander/tables.hpp"

namespace wander {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

TruncatedCarlemanSet set_from(const RunConfig& cfg) {
    if (cfg.example != 1 && cfg.example != 3)
        throw UsageError("--example must be 1 or 3");
    const SetKind kind = cfg.example == 1 ? SetKind::Example1 : SetKind::Example3;
    return build_set(kind, cfg.n, cfg.t);
}

std::string checked_word(const RunConfig& cfg) {
    if (!valid_word(cfg.word))
        throw UsageError("--word must be a nonempty string over f, g, h");
    return cfg.word;
}

Approximant load_approximant(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open map file: " + path);
    ordered_json j;
    in >> j;
    return approximant_from_json(j);
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << "\n"; }

int run_tables(const RunConfig& cfg, std::ostream& out) {
    const std::string word = checked_word(cfg);
    if (cfg.subcommand == "tables derive") {
        emit(out, table_to_json(derive_table(word)));
        return 0;
    }
    if (!has_claimed_table(word))
        throw UsageError("no transcribed table for word '" + word + "'");
    if (cfg.subcommand == "tables claimed") {
        emit(out, table_to_json(claimed_table(word)));
        return 0;
    }
    if (cfg.subcommand != "tables diff")
        throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
    const auto report =
        diff_tables(derive_table(word), claimed_table(word), cfg.k_max);
    emit(out, report_to_json(report));
    return 0;  // discrepancies are the data product, not a failure
}

int run_classify(const RunConfig& cfg, std::ostream& out) {
    const std::string word = checked_word(cfg);
    const auto symbol = parse_symbol(cfg.start);
    if (!symbol) throw UsageError("--start must be Core, G:k or B:k");
    const auto result = classify_orbit(derive_table(word), *symbol, cfg.horizon);
    ordered_json j{{"word", word},
                   {"start", symbol->str()},
                   {"horizon", cfg.horizon},
                   {"classification", classification_to_json(result)}};
    emit(out, j);
    return 0;
}

int run_enumerate(const RunConfig& cfg, std::ostream& out) {
    const auto summary = enumerate_wandering(checked_word(cfg), cfg.k_max);
    emit(out, summary_to_json(summary));
    return 0;
}

int run_geometry(const RunConfig& cfg, std::ostream& out) {
    emit(out, set_to_json(set_from(cfg)));
    return 0;
}

int run_check_complement(const RunConfig& cfg, std::ostream& out) {
    const auto set = set_from(cfg);
    auto box = set_bounds(set);
    box.x0 -= 1.0;
    box.x1 += 1.0;
    box.y0 -= 1.0;
    box.y1 += 1.0;
    const bool connected = complement_connected(set, box, cfg.resolution);
    ordered_json j{{"example", cfg.example},
                   {"n", cfg.n},
                   {"t", cfg.t},
                   {"resolution", cfg.resolution},
                   {"box", ordered_json{box.x0, box.x1, box.y0, box.y1}},
                   {"connected", connected}};
    emit(out, j);
    return connected ? 0 : 1;
}

int run_fit(const RunConfig& cfg, std::ostream& out) {
    const auto set = set_from(cfg);
    const auto name = parse_target_name(cfg.target);
    const auto target = target_profile(name, set);
    ordered_json j{{"target", target_name_str(name)}, {"example", cfg.example},
                   {"n", cfg.n},                      {"t", cfg.t},
                   {"degree", cfg.degree},            {"lambda", cfg.lambda},
                   {"spacing", cfg.spacing},          {"refined", cfg.refine}};
    FitResult fit;
    if (cfg.refine) {
        const auto tolerance = tolerance_profile(name, set);
        const RefinementConfig rc{cfg.lawson_iterations, cfg.derivative_penalty};
        auto refined = fit_refined(set, target, tolerance, cfg.degree, cfg.spacing, rc);
        j["max_ratio"] = refined.max_ratio;
        j["best_iteration"] = refined.best_iteration;
        ordered_json ratios;
        for (const auto& [id, ratio] : refined.component_ratio) ratios[id.str()] = ratio;
        j["component_ratio"] = std::move(ratios);
        fit = std::move(refined.fit);
    } else {
        fit = fit_approximant(set, target, cfg.degree, cfg.lambda, cfg.spacing);
    }
    j["samples"] = fit.sample_count;
    j["max_residual"] = fit.max_residual;
    j["ss_residual"] = fit.ss_residual;
    if (!cfg.out.empty()) {
        std::ofstream file(cfg.out);
        if (!file) throw UsageError("cannot open for writing: " + cfg.out);
        file << approximant_to_json(fit.approximant).dump(1) << "\n";
        if (!file) throw UsageError("failed writing: " + cfg.out);
        j["out"] = cfg.out;
    } else {
        j["approximant"] = approximant_to_json(fit.approximant);
    }
    emit(out, j);
    return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
    const std::string word = checked_word(cfg);
    if (cfg.map_files.size() != word.size())
        throw UsageError("verify: need one --map-file per word letter, outermost first");
    std::vector<EntireMap> chain;
    chain.reserve(cfg.map_files.size());
    for (const auto& path : cfg.map_files)
        chain.push_back(EntireMap{load_approximant(path)});
    const auto set = set_from(cfg);
    const auto report = verify_mapping(chain, set, derive_table(word), cfg.spacing);
    emit(out, report_to_json(report));
    return report.pass ? 0 : 1;
}

int run_fixedpoint(const RunConfig& cfg, std::ostream& out) {
    if (cfg.map_files.size() > 1)
        throw UsageError("fixedpoint: at most one --map-file");
    MapFn map;
    if (!cfg.map_files.empty()) {
        map = MapFn(EntireMap{load_approximant(cfg.map_files.front())});
    } else {
        if (cfg.map.size() != 1)
            throw UsageError("fixedpoint: pass --map f|g|h or a --map-file");
        const auto name = target_for_letter(cfg.map[0]);
        const auto set = set_from(cfg);
        const auto target = target_profile(name, set);
        const auto tolerance = tolerance_profile(name, set);
        const RefinementConfig rc{cfg.lawson_iterations, cfg.derivative_penalty};
        const auto refined =
            fit_refined(set, target, tolerance, cfg.degree, cfg.spacing, rc);
        map = MapFn(EntireMap{refined.fit.approximant});
    }
    const auto result = find_fixed_point(map);
    emit(out, fixed_point_to_json(result));
    return result.converged ? 0 : 1;
}

int run_render(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) throw UsageError("render: --out is required");
    if (cfg.map_files.size() > 1) throw UsageError("render: at most one --map-file");
    const auto set = set_from(cfg);
    std::optional<MapFn> overlay;
    if (!cfg.map_files.empty())
        overlay = MapFn(EntireMap{load_approximant(cfg.map_files.front())});
    const BoundingBox viewport{cfg.viewport_x0, cfg.viewport_x1, cfg.viewport_y0,
                               cfg.viewport_y1};
    const std::string bytes =
        render_regions(set, overlay, viewport, cfg.width, cfg.height);
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw UsageError("cannot open for writing: " + cfg.out);
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) throw UsageError("failed writing: " + cfg.out);
    ordered_json j{{"out", cfg.out},
                   {"width", cfg.width},
                   {"height", cfg.height},
                   {"bytes", bytes.size()}};
    emit(out, j);
    return 0;
}

int execute(const RunConfig& cfg, std::ostream& out) {
    if (cfg.subcommand.rfind("tables", 0) == 0) return run_tables(cfg, out);
    if (cfg.subcommand == "classify") return run_classify(cfg, out);
    if (cfg.subcommand == "enumerate") return run_enumerate(cfg, out);
    if (cfg.subcommand == "geometry build") return run_geometry(cfg, out);
    if (cfg.subcommand == "check-complement") return run_check_complement(cfg, out);
    if (cfg.subcommand == "fit") return run_fit(cfg, out);
    if (cfg.subcommand == "verify") return run_verify(cfg, out);
    if (cfg.subcommand == "fixedpoint") return run_fixedpoint(cfg, out);
    if (cfg.subcommand == "render") return run_render(cfg, out);
    throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
}

void parse_viewport(const std::string& spec, RunConfig& cfg) {
    std::istringstream in(spec);
    double v[4];
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(in >> v[0] >> c1 >> v[1] >> c2 >> v[2] >> c3 >> v[3]) || c1 != ',' ||
        c2 != ',' || c3 != ',')
        throw UsageError("--viewport expects x0,x1,y0,y1");
    cfg.viewport_x0 = v[0];
    cfg.viewport_x1 = v[1];
    cfg.viewport_y0 = v[2];
    cfg.viewport_y1 = v[3];
}

void parse_resolution(const std::string& spec, RunConfig& cfg) {
    std::istringstream in(spec);
    char sep = 'x';
    if (!(in >> cfg.width >> sep >> cfg.height) || (sep != 'x' && sep != 'X') ||
        cfg.width < 1 || cfg.height < 1)
        throw UsageError("--res expects WxH");
}

}  // namespace

ordered_json run_config_to_json(const RunConfig& cfg) {
    return ordered_json{{"subcommand", cfg.subcommand},
                        {"word", cfg.word},
                        {"start", cfg.start},
                        {"k_max", cfg.k_max},
                        {"horizon", cfg.horizon},
                        {"example", cfg.example},
                        {"n", cfg.n},
                        {"t", cfg.t},
                        {"target", cfg.target},
                        {"degree", cfg.degree},
                        {"lambda", cfg.lambda},
                        {"refine", cfg.refine},
                        {"lawson_iterations", cfg.lawson_iterations},
                        {"derivative_penalty", cfg.derivative_penalty},
                        {"spacing", cfg.spacing},
                        {"resolution", cfg.resolution},
                        {"viewport", ordered_json{cfg.viewport_x0, cfg.viewport_x1,
                                                  cfg.viewport_y0, cfg.viewport_y1}},
                        {"width", cfg.width},
                        {"height", cfg.height},
                        {"map", cfg.map},
                        {"map_files", cfg.map_files},
                        {"out", cfg.out}};
}

RunConfig run_config_from_json(const ordered_json& j) {
    RunConfig cfg;
    cfg.subcommand = j.value("subcommand", cfg.subcommand);
    cfg.word = j.value("word", cfg.word);
    cfg.start = j.value("start", cfg.start);
    cfg.k_max = j.value("k_max", cfg.k_max);
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.example = j.value("example", cfg.example);
    cfg.n = j.value("n", cfg.n);
    cfg.t = j.value("t", cfg.t);
    cfg.target = j.value("target", cfg.target);
    cfg.degree = j.value("degree", cfg.degree);
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.refine = j.value("refine", cfg.refine);
    cfg.lawson_iterations = j.value("lawson_iterations", cfg.lawson_iterations);
    cfg.derivative_penalty = j.value("derivative_penalty", cfg.derivative_penalty);
    cfg.spacing = j.value("spacing", cfg.spacing);
    cfg.resolution = j.value("resolution", cfg.resolution);
    if (j.contains("viewport")) {
        const auto& v = j.at("viewport");
        cfg.viewport_x0 = v.at(0).get<double>();
        cfg.viewport_x1 = v.at(1).get<double>();
        cfg.viewport_y0 = v.at(2).get<double>();
        cfg.viewport_y1 = v.at(3).get<double>();
    }
    cfg.width = j.value("width", cfg.width);
    cfg.height = j.value("height", cfg.height);
    cfg.map = j.value("map", cfg.map);
    cfg.map_files = j.value("map_files", cfg.map_files);
    cfg.out = j.value("out", cfg.out);
    return cfg;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string config_path;
    std::string viewport_spec;
    std::string resolution_spec;

    CLI::App app{"wandering-domain tables, geometry, fits and dynamics"};
    app.add_option("--config", config_path,
                   "run the full configuration stored in a JSON file");

    const auto add_set_options = [&cfg](CLI::App* cmd) {
        cmd->add_option("--example", cfg.example, "region family: 1 or 3");
        cmd->add_option("-N,--families", cfg.n, "family count / ray count");
        cmd->add_option("-T,--truncation", cfg.t, "truncation height / radius");
    };

    auto* tables = app.add_subcommand("tables", "transition-table operations");
    tables->require_subcommand(1);
    auto* derive = tables->add_subcommand("derive", "compose the word's tables");
    auto* claimed = tables->add_subcommand("claimed", "transcribed composite table");
    auto* diff = tables->add_subcommand("diff", "derived vs transcribed rows");
    for (CLI::App* cmd : {derive, claimed, diff})
        cmd->add_option("--word", cfg.word, "letters over f,g,h, outermost first")
            ->required();
    diff->add_option("--kmax", cfg.k_max, "largest family index compared");
    derive->callback([&] { cfg.subcommand = "tables derive"; });
    claimed->callback([&] { cfg.subcommand = "tables claimed"; });
    diff->callback([&] { cfg.subcommand = "tables diff"; });

    auto* classify = app.add_subcommand("classify", "symbolic orbit classification");
    classify->add_option("--word", cfg.word)->required();
    classify->add_option("--start", cfg.start, "Core, G:k or B:k");
    classify->add_option("--horizon", cfg.horizon, "iteration budget");
    classify->callback([&] { cfg.subcommand = "classify"; });

    auto* enumerate = app.add_subcommand("enumerate", "classify G(k), B(k) for k <= kmax");
    enumerate->add_option("--word", cfg.word)->required();
    enumerate->add_option("--kmax", cfg.k_max);
    enumerate->callback([&] { cfg.subcommand = "enumerate"; });

    auto* geometry = app.add_subcommand("geometry", "region-set operations");
    geometry->require_subcommand(1);
    auto* build = geometry->add_subcommand("build", "construct the truncated set");
    add_set_options(build);
    build->callback([&] { cfg.subcommand = "geometry build"; });

    auto* check = app.add_subcommand("check-complement",
                                     "flood-fill connectivity of the complement");
    add_set_options(check);
    check->add_option("--resolution", cfg.resolution, "pixels per unit");
    check->callback([&] { cfg.subcommand = "check-complement"; });

    auto* fit = app.add_subcommand("fit", "polynomial log-target fit");
    add_set_options(fit);
    fit->add_option("--target", cfg.target, "alpha, beta or gamma")->required();
    fit->add_option("--degree", cfg.degree);
    fit->add_option("--lambda", cfg.lambda, "ridge weight for the plain fit");
    fit->add_option("--spacing", cfg.spacing, "sample grid step");
    fit->add_flag("--refine,!--no-refine", cfg.refine,
                  "tolerance-weighted fit with derivative control");
    fit->add_option("--lawson", cfg.lawson_iterations, "re-weighting iterations");
    fit->add_option("--derivative-penalty", cfg.derivative_penalty);
    fit->add_option("--out", cfg.out, "write the fitted approximant JSON here");
    fit->callback([&] { cfg.subcommand = "fit"; });

    auto* verify = app.add_subcommand("verify", "check fitted maps against the table");
    add_set_options(verify);
    verify->add_option("--word", cfg.word)->required();
    verify->add_option("--map-file", cfg.map_files,
                       "fitted approximant per letter, outermost first");
    verify->add_option("--spacing", cfg.spacing, "fresh sample step");
    verify->callback([&] { cfg.subcommand = "verify"; });

    auto* fixedpoint = app.add_subcommand("fixedpoint", "attracting fixed point");
    add_set_options(fixedpoint);
    fixedpoint->add_option("--map", cfg.map, "generator letter f, g or h");
    fixedpoint->add_option("--map-file", cfg.map_files, "fitted approximant JSON");
    fixedpoint->add_option("--degree", cfg.degree);
    fixedpoint->add_option("--spacing", cfg.spacing);
    fixedpoint->callback([&] { cfg.subcommand = "fixedpoint"; });

    auto* render = app.add_subcommand("render", "PPM image of regions and dynamics");
    add_set_options(render);
    render->add_option("--viewport", viewport_spec, "x0,x1,y0,y1");
    render->add_option("--res", resolution_spec, "WxH pixels");
    render->add_option("--map-file", cfg.map_files, "overlay escape steps of this map");
    render->add_option("--out", cfg.out, "PPM output path")->required();
    render->callback([&] { cfg.subcommand = "render"; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success))
            return app.exit(e, out, err);  // --help and friends
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (!config_path.empty()) {
            if (!cfg.subcommand.empty())
                throw UsageError("--config replaces the subcommand; pass one or the other");
            std::ifstream in(config_path);
            if (!in) throw UsageError("cannot open config: " + config_path);
            ordered_json j;
            in >> j;
            cfg = run_config_from_json(j);
        } else {
            if (cfg.subcommand.empty())
                throw UsageError("missing subcommand; see --help");
            if (!viewport_spec.empty()) parse_viewport(viewport_spec, cfg);
            if (!resolution_spec.empty()) parse_resolution(resolution_spec, cfg);
        }
        return execute(cfg, out);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 2;
    }
}

}  // namespace wander
