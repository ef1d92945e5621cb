#include "commands.hpp"

#include "console.hpp"
#include "parallel.hpp"
#include "report.hpp"

#include "patchroute/gainmap_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace patchroute::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return out;
}

std::string config_echo(const RunConfig& config, std::size_t scene_count) {
    std::ostringstream s;
    s << "grid_stride=" << config.grid_stride
      << " (assumed gain-map resolution; not fixed by the routing formulation)"
      << "\npatch=" << config.patch.patch_w_px << "x" << config.patch.patch_h_px
      << " budget=" << config.budget << " bin_limit=" << config.bins.bin_limit
      << " margin=" << fmt_g9(config.margin)
      << " iof_threshold=" << fmt_g9(config.criterion.iof_threshold)
      << "\nseed=" << config.seed << " scenes=" << scene_count;
    if (config.synthetic) {
        s << " synthetic: image=" << config.cluster.image_px
          << " clusters_mean=" << fmt_g9(config.cluster.clusters_mean)
          << " boxes_per_cluster=" << fmt_g9(config.cluster.boxes_per_cluster_mean)
          << " scatter_sigma=" << fmt_g9(config.cluster.scatter_sigma_px) << " box_px=["
          << fmt_g9(config.cluster.box_min_px) << "," << fmt_g9(config.cluster.box_max_px) << "]";
    }
    return s.str();
}

constexpr CliStrategy kCompareStrategies[] = {CliStrategy::SoftLinear, CliStrategy::SoftGaussian,
                                              CliStrategy::RigidNms, CliStrategy::ExactGreedy};

// Per-scene coverage reports for one strategy at the given budget, scene order
// preserved regardless of the worker schedule.
std::vector<CoverageReport> reports_for_strategy(const std::vector<Scene>& scenes,
                                                 const RunConfig& config, CliStrategy strategy,
                                                 const PatchSpec& patch, int budget) {
    std::vector<CoverageReport> reports(scenes.size());
    parallel_for(scenes.size(), config.jobs, [&](std::size_t i) {
        const Scene& scene = scenes[i];
        const GridSpec grid = grid_for(scene.extent, config.grid_stride);
        check_patch(patch, scene.extent, scene.name);
        const PatchSelection sel = select_for_scene(strategy, scene, grid, patch, budget,
                                                    config.bins, config.criterion);
        reports[i] = evaluate_selection(scene.boxes, sel, config.criterion);
    });
    return reports;
}

// Average coverage rate at every budget 1..k_max from per-scene reports taken
// at k_max (prefix truncation of the nested greedy selections).
std::vector<double> curve_from_reports(const std::vector<Scene>& scenes,
                                       const std::vector<CoverageReport>& reports, int k_max) {
    std::vector<double> rates(static_cast<std::size_t>(k_max), 0.0);
    for (std::size_t s = 0; s < reports.size(); ++s) {
        int covered = 0;
        for (int k = 1; k <= k_max; ++k) {
            if (static_cast<std::size_t>(k) <= reports[s].per_rank_marginal.size()) {
                covered += reports[s].per_rank_marginal[static_cast<std::size_t>(k - 1)];
            }
            const double rate = scenes[s].boxes.empty()
                                    ? 1.0
                                    : static_cast<double>(covered) / scenes[s].boxes.size();
            rates[static_cast<std::size_t>(k - 1)] += rate;
        }
    }
    if (!scenes.empty()) {
        for (double& r : rates) r /= static_cast<double>(scenes.size());
    }
    return rates;
}

double rate_at_budget(const Scene& scene, const CoverageReport& report, int budget) {
    if (scene.boxes.empty()) return 1.0;
    int covered = 0;
    const std::size_t upto =
        std::min<std::size_t>(static_cast<std::size_t>(budget), report.per_rank_marginal.size());
    for (std::size_t k = 0; k < upto; ++k) covered += report.per_rank_marginal[k];
    return static_cast<double>(covered) / static_cast<double>(scene.boxes.size());
}

} // namespace

std::string strategy_name(CliStrategy s) {
    switch (s) {
        case CliStrategy::SoftLinear: return "soft-linear";
        case CliStrategy::SoftGaussian: return "soft-gaussian";
        case CliStrategy::RigidNms: return "rigid-nms";
        case CliStrategy::ExactGreedy: return "exact-greedy";
    }
    return "unknown";
}

std::vector<Scene> load_scenes(const RunConfig& config,
                               const std::optional<std::filesystem::path>& annotations) {
    if (annotations) {
        const SceneDataset dataset = load_annotations(*annotations);
        if (dataset.dropped_boxes > 0) {
            std::cout << yellow("warning: ") << dataset.dropped_boxes
                      << " degenerate boxes dropped at load\n";
        }
        return dataset.scenes;
    }
    if (!config.synthetic) {
        throw std::invalid_argument("provide an annotation file or --synthetic");
    }
    return make_cluster_dataset(config.synth_scenes, config.cluster, config.seed);
}

PatchSelection select_for_scene(CliStrategy strategy, const Scene& scene, const GridSpec& grid,
                                const PatchSpec& patch, int budget, const BinConfig& bins,
                                const CoverageCriterion& criterion) {
    if (strategy == CliStrategy::ExactGreedy) {
        return exact_greedy_select(scene.boxes, grid, patch, budget, criterion);
    }
    const GainMap gain = build_gt_gainmap_fast(scene.boxes, grid, patch, bins);
    Strategy router_strategy = Strategy::SoftLinear;
    if (strategy == CliStrategy::SoftGaussian) router_strategy = Strategy::SoftGaussian;
    if (strategy == CliStrategy::RigidNms) router_strategy = Strategy::RigidNms;
    return route(gain, {budget, patch, router_strategy});
}

void write_selection_csv(std::ostream& out, const PatchSelection& selection) {
    out << "rank,gx,gy,score,x1,y1,x2,y2\n";
    for (const auto& e : selection.entries) {
        out << e.rank << ',' << e.gx << ',' << e.gy << ',' << fmt_g9(e.score) << ','
            << fmt_g9(e.rect.x1) << ',' << fmt_g9(e.rect.y1) << ',' << fmt_g9(e.rect.x2) << ','
            << fmt_g9(e.rect.y2) << '\n';
    }
}

int run_gainmap(const RunConfig& config, const std::filesystem::path& annotations) {
    const auto start = Clock::now();
    const SceneDataset dataset = load_annotations(annotations);
    std::filesystem::create_directories(config.out_dir);

    struct SceneStats {
        std::string name;
        int grid_w = 0, grid_h = 0;
        std::size_t boxes = 0;
        double sum = 0.0, max = 0.0, lpm_self = 0.0;
        std::size_t peaks = 0;
        int queries = 0;
        double verify_error = 0.0;
    };
    std::vector<SceneStats> stats(dataset.scenes.size());

    // sanitized names can collide; disambiguate with the scene id
    std::vector<std::string> file_names(dataset.scenes.size());
    {
        std::set<std::string> used;
        for (std::size_t i = 0; i < dataset.scenes.size(); ++i) {
            std::string name = sanitize_name(dataset.scenes[i].name);
            if (!used.insert(name).second) {
                name += "_" + std::to_string(dataset.scenes[i].id);
                used.insert(name);
            }
            file_names[i] = std::move(name);
        }
    }

    parallel_for(dataset.scenes.size(), config.jobs, [&](std::size_t i) {
        const Scene& scene = dataset.scenes[i];
        const GridSpec grid = grid_for(scene.extent, config.grid_stride);
        check_patch(config.patch, scene.extent, scene.name);
        const PatchSpec& patch = config.patch;
        const GainMap map = build_gt_gainmap_fast(scene.boxes, grid, patch, config.bins);

        SceneStats& s = stats[i];
        s.name = file_names[i];
        s.grid_w = grid.grid_w;
        s.grid_h = grid.grid_h;
        s.boxes = scene.boxes.size();
        s.sum = map.sum();
        s.max = map.max_value();
        const PeakSet peaks = extract_peaks(map);
        s.peaks = peaks.size();
        s.lpm_self = lpm_loss(map, peaks, config.margin);
        s.queries = query_budget(map, patch, config.queries);

        if (config.verify) {
            const GainMap naive = build_gt_gainmap(scene.boxes, grid, patch, config.bins);
            for (std::size_t c = 0; c < map.values.size(); ++c) {
                s.verify_error = std::max(s.verify_error,
                                          std::abs(map.values[c] - naive.values[c]));
            }
        }
        write_gainmap_file(config.out_dir / (s.name + ".gainmap"), map);
    });

    auto csv = open_out(config.out_dir / "gainmap_stats.csv");
    csv << "image,grid_w,grid_h,boxes,gain_sum,gain_max,peaks,lpm_self,query_budget\n";
    for (const auto& s : stats) {
        csv << s.name << ',' << s.grid_w << ',' << s.grid_h << ',' << s.boxes << ','
            << fmt_g9(s.sum) << ',' << fmt_g9(s.max) << ',' << s.peaks << ','
            << fmt_g9(s.lpm_self) << ',' << s.queries << '\n';
    }

    double worst = 0.0;
    for (const auto& s : stats) worst = std::max(worst, s.verify_error);
    std::cout << "gainmap: " << dataset.scenes.size() << " maps -> " << config.out_dir.string()
              << " (" << fmt_g9(elapsed_ms(start)) << " ms)\n";
    if (config.verify) {
        if (worst > 1e-6) {
            std::cout << red("verify FAIL") << ": fast/naive mismatch " << fmt_g9(worst) << "\n";
            return 1;
        }
        std::cout << green("verify OK") << ": max |fast - naive| = " << fmt_g9(worst) << "\n";
    }
    return 0;
}

int run_route(const RunConfig& config, const std::vector<std::filesystem::path>& map_files) {
    if (map_files.empty()) {
        throw std::invalid_argument("route: no gain-map files given");
    }
    if (config.strategy == CliStrategy::ExactGreedy) {
        throw std::invalid_argument(
            "route: exact-greedy needs annotations; use a gain-map strategy "
            "(soft-linear, soft-gaussian, rigid-nms)");
    }
    std::filesystem::create_directories(config.out_dir);

    auto queries_csv = open_out(config.out_dir / "queries.csv");
    queries_csv << "map,gain_sum,query_budget\n";

    for (const std::filesystem::path& file : map_files) {
        const auto start = Clock::now();
        const GainMap map = read_gainmap_file(file);
        check_patch(config.patch, map.grid.extent, file.filename().string());
        const PatchSpec& patch = config.patch;
        Strategy strategy = Strategy::SoftLinear;
        if (config.strategy == CliStrategy::SoftGaussian) strategy = Strategy::SoftGaussian;
        if (config.strategy == CliStrategy::RigidNms) strategy = Strategy::RigidNms;
        const PatchSelection sel = route(map, {config.budget, patch, strategy});

        const std::string stem = sanitize_name(file.stem().string());
        auto csv = open_out(config.out_dir / (stem + "_selection.csv"));
        write_selection_csv(csv, sel);
        const int queries = query_budget(map, patch, config.queries);
        queries_csv << stem << ',' << fmt_g9(map.sum()) << ',' << queries << '\n';

        std::cout << stem << ": K=" << config.budget << " strategy="
                  << strategy_name(config.strategy) << " queries=" << queries << " ("
                  << fmt_g9(elapsed_ms(start)) << " ms)\n";
    }
    return 0;
}

int run_compare(const RunConfig& config,
                const std::optional<std::filesystem::path>& annotations) {
    const auto start = Clock::now();
    const std::vector<Scene> scenes = load_scenes(config, annotations);
    std::filesystem::create_directories(config.out_dir);
    const int k_max = std::max(config.k_max, config.budget);
    const std::string echo = config_echo(config, scenes.size());

    auto table = open_out(config.out_dir / "compare_coverage.csv");
    table << "strategy,patch_px,K,covered,total,rate\n";

    std::vector<Series> curve_series;
    std::vector<Series> marginal_series;
    std::vector<Series> cdf_series;
    std::vector<std::pair<std::string, double>> histogram_bars;
    std::vector<std::pair<CliStrategy, double>> default_rates;

    for (CliStrategy strategy : kCompareStrategies) {
        const std::string name = strategy_name(strategy);
        const auto reports = reports_for_strategy(scenes, config, strategy, config.patch, k_max);

        // coverage-vs-K table
        const std::vector<double> curve = curve_from_reports(scenes, reports, k_max);
        auto curve_csv = open_out(config.out_dir / ("coverage_vs_k_" + name + ".csv"));
        curve_csv << "K,avg_rate\n";
        Series cs{name, {}};
        for (int k = 1; k <= k_max; ++k) {
            curve_csv << k << ',' << fmt_g9(curve[static_cast<std::size_t>(k - 1)]) << '\n';
            cs.points.push_back({static_cast<double>(k), curve[static_cast<std::size_t>(k - 1)]});
        }
        curve_series.push_back(std::move(cs));

        // mean objects newly covered per rank
        auto marginal_csv = open_out(config.out_dir / ("marginal_" + name + ".csv"));
        marginal_csv << "rank,marginal\n";
        Series ms{name, {}};
        for (int k = 1; k <= k_max; ++k) {
            double total = 0.0;
            for (const auto& r : reports) {
                if (static_cast<std::size_t>(k) <= r.per_rank_marginal.size()) {
                    total += r.per_rank_marginal[static_cast<std::size_t>(k - 1)];
                }
            }
            const double mean = scenes.empty() ? 0.0 : total / static_cast<double>(scenes.size());
            marginal_csv << k << ',' << fmt_g9(mean) << '\n';
            ms.points.push_back({static_cast<double>(k), mean});
        }
        marginal_series.push_back(std::move(ms));

        // per-image rate histogram/CDF at the default budget
        constexpr int kBins = 20;
        std::vector<int> histogram(kBins, 0);
        for (std::size_t s = 0; s < scenes.size(); ++s) {
            const double rate = rate_at_budget(scenes[s], reports[s], config.budget);
            const int bin = std::min(kBins - 1, static_cast<int>(rate * kBins));
            ++histogram[static_cast<std::size_t>(bin)];
        }
        auto cdf_csv = open_out(config.out_dir / ("cdf_" + name + ".csv"));
        cdf_csv << "rate_bin,count,cum_fraction\n";
        Series ds{name, {}};
        int running = 0;
        for (int b = 0; b < kBins; ++b) {
            running += histogram[static_cast<std::size_t>(b)];
            const double upper = static_cast<double>(b + 1) / kBins;
            const double fraction =
                scenes.empty() ? 1.0 : static_cast<double>(running) / scenes.size();
            cdf_csv << fmt_g9(upper) << ',' << histogram[static_cast<std::size_t>(b)] << ','
                    << fmt_g9(fraction) << '\n';
            ds.points.push_back({upper, fraction});
            if (strategy == CliStrategy::SoftLinear) {
                histogram_bars.push_back(
                    {fmt_g9(upper), static_cast<double>(histogram[static_cast<std::size_t>(b)])});
            }
        }
        cdf_series.push_back(std::move(ds));

        // aggregate coverage at the default budget
        int covered = 0;
        int total = 0;
        for (std::size_t s = 0; s < scenes.size(); ++s) {
            total += static_cast<int>(scenes[s].boxes.size());
            const std::size_t upto = std::min<std::size_t>(
                static_cast<std::size_t>(config.budget), reports[s].per_rank_marginal.size());
            for (std::size_t k = 0; k < upto; ++k) covered += reports[s].per_rank_marginal[k];
        }
        const double rate = total == 0 ? 1.0 : static_cast<double>(covered) / total;
        table << name << ',' << config.patch.patch_w_px << ',' << config.budget << ',' << covered
              << ',' << total << ',' << fmt_g9(rate) << '\n';
        default_rates.push_back({strategy, rate});
    }

    // patch-size sweep at the paired budgets
    for (const auto& [patch_px, k] : config.patch_sweep) {
        if (patch_px == config.patch.patch_w_px && k == config.budget) continue;
        const PatchSpec patch{patch_px, patch_px};
        for (CliStrategy strategy : kCompareStrategies) {
            const auto reports = reports_for_strategy(scenes, config, strategy, patch, k);
            int covered = 0;
            int total = 0;
            for (const auto& r : reports) {
                total += r.total_objects;
                covered += r.covered_objects;
            }
            const double rate = total == 0 ? 1.0 : static_cast<double>(covered) / total;
            table << strategy_name(strategy) << ',' << patch_px << ',' << k << ',' << covered
                  << ',' << total << ',' << fmt_g9(rate) << '\n';
        }
    }

    write_svg_line_chart(config.out_dir / "coverage_vs_k.svg", "Average coverage rate vs K", echo,
                         "patch budget K", "coverage rate", curve_series);
    write_svg_line_chart(config.out_dir / "marginal.svg", "Marginal coverage gain per rank", echo,
                         "rank", "objects newly covered", marginal_series);
    write_svg_line_chart(config.out_dir / "rate_cdf.svg", "Per-image coverage CDF", echo,
                         "coverage rate", "fraction of images", cdf_series);
    write_svg_bar_chart(config.out_dir / "rate_hist.svg",
                        "Per-image coverage histogram (soft-linear)", echo, "coverage rate bin",
                        "images", histogram_bars);

    auto summary = open_out(config.out_dir / "compare_summary.txt");
    summary << "strategy comparison\n" << echo << "\n\n";
    summary << "coverage at K=" << config.budget
            << ", iof_threshold=" << fmt_g9(config.criterion.iof_threshold) << ":\n";
    for (const auto& [strategy, rate] : default_rates) {
        summary << "  " << strategy_name(strategy) << ": " << fmt_g9(rate) << '\n';
    }
    const double linear = default_rates[0].second;
    const double rigid = default_rates[2].second;
    summary << "\nlinear - rigid gap: " << fmt_g9((linear - rigid) * 100.0)
            << " percentage points\n";

    std::cout << "compare: " << scenes.size() << " scenes, 4 strategies -> "
              << config.out_dir.string() << " (" << fmt_g9(elapsed_ms(start)) << " ms)\n";
    for (const auto& [strategy, rate] : default_rates) {
        std::cout << "  " << strategy_name(strategy) << " @K=" << config.budget << ": "
                  << fmt_g9(rate) << '\n';
    }
    return 0;
}

int run_oracle(const RunConfig& config, int trials) {
    const auto start = Clock::now();
    DetRng rng(config.seed);
    const double factor = 1.0 - 1.0 / std::exp(1.0);
    int violations = 0;
    double worst_ratio = 1.0;
    for (int t = 0; t < trials; ++t) {
        const SmallInstance inst = random_small_instance(rng);
        const auto greedy =
            greedy_exact_cover(inst.boxes, inst.candidates, inst.budget, config.criterion);
        const auto opt = brute_force_optimal(inst, config.criterion);
        const int bound = static_cast<int>(std::ceil(factor * opt.covered - 1e-9));
        if (greedy.covered() > opt.covered || greedy.covered() < bound) {
            ++violations;
            std::cout << red("violation") << " at trial " << t << ": greedy="
                      << greedy.covered() << " opt=" << opt.covered << " bound=" << bound << '\n';
        }
        if (opt.covered > 0) {
            worst_ratio =
                std::min(worst_ratio, static_cast<double>(greedy.covered()) / opt.covered);
        }
    }
    std::cout << "oracle: " << trials << " trials, " << violations << " violations, worst "
              << "greedy/opt ratio " << fmt_g9(worst_ratio) << " (bound " << fmt_g9(factor)
              << ", " << fmt_g9(elapsed_ms(start)) << " ms)\n";
    if (violations == 0) {
        std::cout << green("oracle OK") << '\n';
        return 0;
    }
    std::cout << red("oracle FAIL") << '\n';
    return 1;
}

int run_tile(const RunConfig& config, const std::filesystem::path& annotations) {
    const SceneDataset dataset = load_annotations(annotations);
    const SceneDataset tiled = tile_dataset(dataset, config.tile_target);
    std::filesystem::create_directories(config.out_dir);

    nlohmann::ordered_json root;
    root["images"] = nlohmann::ordered_json::array();
    root["annotations"] = nlohmann::ordered_json::array();
    root["categories"] = nlohmann::ordered_json::array();
    int ann_id = 1;
    std::size_t box_total = 0;
    for (const Scene& scene : tiled.scenes) {
        root["images"].push_back({{"id", scene.id},
                                  {"file_name", scene.name},
                                  {"width", scene.extent.width_px},
                                  {"height", scene.extent.height_px}});
        for (const BBox& box : scene.boxes) {
            root["annotations"].push_back({{"id", ann_id++},
                                           {"image_id", scene.id},
                                           {"category_id", box.category_id},
                                           {"bbox", {box.x_min, box.y_min, box.width(),
                                                     box.height()}}});
            ++box_total;
        }
    }
    for (const auto& [id, name] : tiled.categories) {
        root["categories"].push_back({{"id", id}, {"name", name}});
    }

    const auto out_path = config.out_dir / "tiled_annotations.json";
    auto out = open_out(out_path);
    out << root.dump(2) << '\n';

    std::cout << "tile: " << dataset.scenes.size() << " scenes -> " << tiled.scenes.size()
              << " tiles of " << config.tile_target << "px, " << box_total
              << " boxes -> " << out_path.string() << '\n';
    return 0;
}

int run_curve(const RunConfig& config, const std::optional<std::filesystem::path>& annotations) {
    const auto start = Clock::now();
    const std::vector<Scene> scenes = load_scenes(config, annotations);
    std::filesystem::create_directories(config.out_dir);
    const int k_max = config.k_max;

    const auto reports =
        reports_for_strategy(scenes, config, config.strategy, config.patch, k_max);
    const std::vector<double> curve = curve_from_reports(scenes, reports, k_max);

    const std::string name = strategy_name(config.strategy);
    auto csv = open_out(config.out_dir / ("curve_" + name + ".csv"));
    csv << "K,avg_rate\n";
    Series series{name, {}};
    for (int k = 1; k <= k_max; ++k) {
        csv << k << ',' << fmt_g9(curve[static_cast<std::size_t>(k - 1)]) << '\n';
        series.points.push_back({static_cast<double>(k), curve[static_cast<std::size_t>(k - 1)]});
    }
    write_svg_line_chart(config.out_dir / "curve.svg", "Coverage rate vs K (" + name + ")",
                         config_echo(config, scenes.size()), "patch budget K", "coverage rate",
                         {series});

    std::cout << "curve: " << name << " on " << scenes.size() << " scenes, rate@" << k_max
              << " = " << fmt_g9(curve.back()) << " (" << fmt_g9(elapsed_ms(start)) << " ms)\n";
    return 0;
}

} // namespace patchroute::cli
