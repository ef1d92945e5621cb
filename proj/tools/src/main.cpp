#include "commands.hpp"
#include "console.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace {

using patchroute::cli::CliStrategy;
using patchroute::cli::RunConfig;

std::vector<std::pair<int, int>> parse_patch_sweep(const std::string& text) {
    // "256:160,512:40,1024:10" -> [(patch_px, K), ...]
    std::vector<std::pair<int, int>> sweep;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw CLI::ValidationError("--patch-sweep", "expected patch:K pairs, got " + item);
        }
        sweep.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
    }
    return sweep;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverage-maximizing sparse patch routing for ultra-high-resolution scenes"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value config file");

    RunConfig config;
    int patch_size = 512;
    int trials = 500;
    std::string patch_sweep_text;

    const std::map<std::string, CliStrategy> strategy_names{
        {"soft-linear", CliStrategy::SoftLinear},
        {"soft-gaussian", CliStrategy::SoftGaussian},
        {"rigid-nms", CliStrategy::RigidNms},
        {"exact-greedy", CliStrategy::ExactGreedy},
    };

    app.add_option("--grid-stride", config.grid_stride, "gain-map stride in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--patch-size", patch_size, "square patch side in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--budget", config.budget, "number of selected patches K")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--strategy", config.strategy, "patch selection strategy")
        ->transform(CLI::CheckedTransformer(strategy_names, CLI::ignore_case))
        ->default_str("soft-linear");
    app.add_option("--margin", config.margin, "local peak margin")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--iof-threshold", config.criterion.iof_threshold,
                   "IoF needed to count an object as covered")
        ->check(CLI::Range(1e-9, 1.0))
        ->capture_default_str();
    app.add_option("--bin-limit", config.bins.bin_limit, "discrete bin limit M")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", config.seed, "RNG seed")->capture_default_str();
    app.add_option("--out-dir", config.out_dir, "output directory")->capture_default_str();
    app.add_flag("--verify", config.verify, "cross-check the fast builder against the naive one");
    app.add_option("--jobs", config.jobs, "worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--query-scale", config.queries.scale, "query budget scale c")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--tile-target", config.tile_target, "tile side in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--k-max", config.k_max, "largest budget for curves/sweeps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--patch-sweep", patch_sweep_text,
                   "patch:K pairs for compare, e.g. 256:160,512:40,1024:10");

    app.add_flag("--synthetic", config.synthetic, "use the seeded synthetic cluster dataset");
    app.add_option("--scenes", config.synth_scenes, "synthetic scene count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--image-px", config.cluster.image_px, "synthetic canvas side in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--clusters", config.cluster.clusters_mean, "mean clusters per scene")
        ->capture_default_str();
    app.add_option("--cluster-boxes", config.cluster.boxes_per_cluster_mean,
                   "mean boxes per cluster")
        ->capture_default_str();
    app.add_option("--cluster-sigma", config.cluster.scatter_sigma_px,
                   "box scatter sigma in pixels")
        ->capture_default_str();
    app.add_option("--box-min", config.cluster.box_min_px, "min box side")->capture_default_str();
    app.add_option("--box-max", config.cluster.box_max_px, "max box side")->capture_default_str();

    std::string gainmap_annotations;
    auto* cmd_gainmap = app.add_subcommand(
        "gainmap", "build ground-truth gain maps from annotations");
    cmd_gainmap->add_option("annotations", gainmap_annotations, "COCO-style annotation JSON")
        ->required();

    std::vector<std::string> route_maps;
    auto* cmd_route = app.add_subcommand("route", "select patches from gain-map files");
    cmd_route->add_option("maps", route_maps, "gain-map text files")->required();

    std::string compare_annotations;
    auto* cmd_compare =
        app.add_subcommand("compare", "run all strategies and emit coverage reports");
    cmd_compare->add_option("annotations", compare_annotations,
                            "COCO-style annotation JSON (omit with --synthetic)");

    auto* cmd_oracle =
        app.add_subcommand("oracle", "check exact greedy against the brute-force optimum");
    cmd_oracle->add_option("--trials", trials, "number of random instances")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::string tile_annotations;
    auto* cmd_tile = app.add_subcommand("tile", "split oversized scenes into padded tiles");
    cmd_tile->add_option("annotations", tile_annotations, "COCO-style annotation JSON")
        ->required();

    std::string curve_annotations;
    auto* cmd_curve = app.add_subcommand("curve", "coverage-vs-K curve for one strategy");
    cmd_curve->add_option("annotations", curve_annotations,
                          "COCO-style annotation JSON (omit with --synthetic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    config.patch = {patch_size, patch_size};
    try {
        if (!patch_sweep_text.empty()) {
            config.patch_sweep = parse_patch_sweep(patch_sweep_text);
        }
        auto optional_path = [](const std::string& s) {
            return s.empty() ? std::nullopt
                             : std::optional<std::filesystem::path>(std::filesystem::path(s));
        };
        if (cmd_gainmap->parsed()) {
            return patchroute::cli::run_gainmap(config, gainmap_annotations);
        }
        if (cmd_route->parsed()) {
            std::vector<std::filesystem::path> files(route_maps.begin(), route_maps.end());
            return patchroute::cli::run_route(config, files);
        }
        if (cmd_compare->parsed()) {
            return patchroute::cli::run_compare(config, optional_path(compare_annotations));
        }
        if (cmd_oracle->parsed()) {
            return patchroute::cli::run_oracle(config, trials);
        }
        if (cmd_tile->parsed()) {
            return patchroute::cli::run_tile(config, tile_annotations);
        }
        if (cmd_curve->parsed()) {
            return patchroute::cli::run_curve(config, optional_path(curve_annotations));
        }
    } catch (const std::exception& e) {
        std::cerr << patchroute::cli::red("error: ") << e.what() << '\n';
        return 2;
    }
    return 2;
}
