// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "patchroute/coverage.hpp"
#include "patchroute/gainmap.hpp"
#include "patchroute/gainmap_io.hpp"
#include "patchroute/router.hpp"
#include "patchroute/synthetic.hpp"

#include "commands.hpp"
#include "parallel.hpp"
#include "report.hpp"

#include "support/generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace patchroute;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    bool pass = true;
    std::string detail;
    double limit_s = 0.0; // 0 = no stated runtime limit

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

int g_failures = 0;

void report(int index, const std::string& name, Criterion& c, double elapsed_s) {
    if (c.limit_s > 0.0 && elapsed_s > c.limit_s) {
        c.pass = false;
        c.note("runtime " + cli::fmt_g9(elapsed_s) + " s exceeds " + cli::fmt_g9(c.limit_s) +
               " s");
    }
    if (!c.pass) ++g_failures;
    std::printf("[%2d] %s  %-34s (%.2f s)%s%s\n", index, c.pass ? "PASS" : "FAIL", name.c_str(),
                elapsed_s, c.detail.empty() ? "" : "  ", c.detail.c_str());
    std::fflush(stdout);
}

template <typename Fn>
void run(int index, const std::string& name, double limit_s, Fn&& fn) {
    Criterion c;
    c.limit_s = limit_s;
    const auto start = Clock::now();
    try {
        fn(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.note(std::string("exception: ") + e.what());
    }
    report(index, name, c, std::chrono::duration<double>(Clock::now() - start).count());
}

GainMap strip3(std::initializer_list<double> values) {
    GainMap map = GainMap::zeros({3, 1, {192, 192}});
    int gx = 0;
    for (double v : values) map.at(gx++, 0) = v;
    return map;
}

// ---- 1. Algorithm hand-trace fixtures -------------------------------------

void criterion_hand_traces(Criterion& c) {
    const RouterConfig soft{2, {128, 128}, Strategy::SoftLinear};
    const RouterConfig rigid{2, {128, 128}, Strategy::RigidNms};

    const auto a = soft_subtract_select(strip3({4, 0, 3}), soft);
    c.require(a.entries.size() == 2 && a.entries[0].gx == 0 && a.entries[0].score == 4.0 &&
                  a.entries[1].gx == 2 && a.entries[1].score == 3.0,
              "[4,0,3] trace mismatch");

    const auto b = soft_subtract_select(strip3({4, 3, 0}), soft);
    c.require(b.entries.size() == 2 && b.entries[0].gx == 0 && b.entries[0].score == 4.0 &&
                  b.entries[1].gx == 1 && b.entries[1].score == 1.0,
              "[4,3,0] trace mismatch");

    const auto z = soft_subtract_select(strip3({0, 0, 0}), {3, {128, 128}, Strategy::SoftLinear});
    bool zeros_ok = z.entries.size() == 3;
    for (int i = 0; i < 3 && zeros_ok; ++i) {
        const auto& e = z.entries[static_cast<std::size_t>(i)];
        zeros_ok = e.gx == i && e.gy == 0 && e.score == 0.0;
    }
    c.require(zeros_ok, "all-zero map tie-break mismatch");

    const auto r = rigid_nms_select(strip3({4, 3, 0}), rigid);
    c.require(r.entries.size() == 2 && r.entries[0].gx == 0 && r.entries[0].score == 4.0 &&
                  r.entries[1].gx == 1 && r.entries[1].score == 0.0,
              "rigid contrast fixture mismatch");
}

// ---- 2. Greedy approximation bound -----------------------------------------

void criterion_greedy_bound(Criterion& c) {
    const CoverageCriterion half{0.5};
    DetRng rng(20240801);
    const double factor = 1.0 - 1.0 / std::exp(1.0);
    int violations = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        const SmallInstance inst = random_small_instance(rng);
        const auto greedy = greedy_exact_cover(inst.boxes, inst.candidates, inst.budget, half);
        const auto opt = brute_force_optimal(inst, half);
        const int bound = static_cast<int>(std::ceil(factor * opt.covered - 1e-9));
        if (greedy.covered() > opt.covered || greedy.covered() < bound) ++violations;
    }
    c.require(violations == 0, std::to_string(violations) + " bound violations");
    c.note(std::to_string(trials) + " instances");
}

// ---- 3. Fast/naive gain-map equivalence and speed ---------------------------

void criterion_fast_naive(Criterion& c) {
    const BinConfig bins{6};
    DetRng seed_rng(777);
    const int scene_count = 1000;
    std::vector<std::uint64_t> seeds(scene_count);
    for (auto& s : seeds) s = static_cast<std::uint64_t>(seed_rng.uniform() * 1e18);

    std::vector<double> worst(static_cast<std::size_t>(scene_count), 0.0);
    cli::parallel_for(static_cast<std::size_t>(scene_count), 0, [&](std::size_t i) {
        DetRng rng(seeds[i]);
        const auto spec = testgen::random_scene_spec(rng, 128, 500);
        const GainMap naive = build_gt_gainmap(spec.boxes, spec.grid, spec.patch, bins);
        const GainMap fast = build_gt_gainmap_fast(spec.boxes, spec.grid, spec.patch, bins);
        double w = 0.0;
        for (std::size_t k = 0; k < naive.values.size(); ++k) {
            w = std::max(w, std::abs(naive.values[k] - fast.values[k]));
        }
        worst[i] = w;
    });
    double max_err = 0.0;
    for (double w : worst) max_err = std::max(max_err, w);
    c.require(max_err < 1e-6, "per-cell error " + cli::fmt_g9(max_err));

    // timing target: 128x128 grid, 500 boxes, 8192^2 canvas, 512 patch
    DetRng rng(4242);
    const GridSpec grid{128, 128, {8192, 8192}};
    const PatchSpec patch{512, 512};
    const auto boxes = testgen::random_boxes(rng, grid.extent, 500);

    const auto time_of = [&](auto&& builder, int reps) {
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < reps; ++r) {
            const auto t0 = Clock::now();
            const GainMap m = builder(boxes, grid, patch, bins);
            best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
            if (m.values.empty()) std::abort(); // keep the result alive
        }
        return best;
    };
    const double naive_s = time_of(build_gt_gainmap, 3);
    const double fast_s = time_of(build_gt_gainmap_fast, 20);
    const double ratio = naive_s / fast_s;
    c.require(ratio >= 5.0, "speedup below 5x");
    c.note("1000 scenes, max err " + cli::fmt_g9(max_err) + ", speedup " +
           cli::fmt_g9(ratio) + "x");
}

// ---- 4. Kernel and selection invariants -------------------------------------

void criterion_invariants(Criterion& c) {
    DetRng rng(1313);
    int maps = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        // kernel properties
        const OverlapKernel lin{rng.uniform(0.5, 16.0), rng.uniform(0.5, 16.0),
                                KernelShape::Linear};
        const OverlapKernel gauss{lin.pw_grid, lin.ph_grid, KernelShape::Gaussian};
        const double dx = rng.uniform(-20.0, 20.0);
        const double dy = rng.uniform(-20.0, 20.0);
        for (const auto& k : {lin, gauss}) {
            const double v = kernel_eval(k, dx, dy);
            c.require(v >= 0.0 && v <= 1.0, "kernel range");
            c.require(std::abs(kernel_eval(k, -dx, dy) - v) < 1e-12, "kernel symmetry");
        }
        c.require(std::abs(kernel_eval(lin, dx, dy) -
                           kernel_eval(lin, dx, 0.0) * kernel_eval(lin, 0.0, dy)) < 1e-12,
                  "kernel separability");

        // selection invariants on a random map; every 10th trial drains the
        // whole map so each cell's residual value surfaces as a score and the
        // non-negativity clamp is observable
        const GainMap map = testgen::random_gainmap(rng, 20, 36.0);
        const int budget = trial % 10 == 0 ? map.grid.cell_count()
                                           : rng.uniform_int(1, std::min(map.grid.cell_count(), 25));
        const Strategy strategy = trial % 3 == 0   ? Strategy::RigidNms
                                  : trial % 3 == 1 ? Strategy::SoftLinear
                                                   : Strategy::SoftGaussian;
        const PatchSelection sel = route(map, {budget, {256, 256}, strategy});
        double previous = std::numeric_limits<double>::infinity();
        std::set<std::pair<int, int>> centers;
        for (const auto& e : sel.entries) {
            c.require(e.score >= 0.0, "negative score");
            c.require(e.score <= previous, "score monotonicity");
            previous = e.score;
            centers.insert({e.gx, e.gy});
        }
        c.require(centers.size() == sel.entries.size(), "duplicate centers");
        ++maps;
        if (!c.pass) break;
    }
    c.note(std::to_string(maps) + " random maps");
}

// ---- 5. Bin decoding ---------------------------------------------------------

void criterion_decoding(Criterion& c) {
    const std::vector<double> uniform(7, 1.5);
    c.require(decode_expectation(uniform) == 13.0, "uniform decode != 13.0 exactly");

    std::vector<double> lo(7, 0.0);
    lo[0] = 50.0;
    c.require(std::abs(decode_expectation(lo)) < 1e-6, "one-hot(0) limit");
    std::vector<double> hi(7, 0.0);
    hi[6] = 50.0;
    c.require(std::abs(decode_expectation(hi) - 36.0) < 1e-6, "one-hot(6) limit");

    DetRng rng(5);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> z(7);
        for (double& v : z) v = rng.uniform(-20.0, 20.0);
        const double g = decode_expectation(z);
        std::vector<double> shifted = z;
        const double offset = rng.uniform(-50.0, 50.0);
        for (double& v : shifted) v += offset;
        c.require(std::abs(decode_expectation(shifted) - g) < 1e-9, "shift invariance");
    }
}

// ---- 6. LPM subgradient vs finite differences --------------------------------

void criterion_lpm_gradient(Criterion& c) {
    DetRng rng(60606);
    const double margin = 0.05;
    const double step = 1e-5;
    int accepted = 0;
    while (accepted < 100) {
        const GainMap gt = testgen::random_gainmap(rng, 10, 36.0);
        const PeakSet peaks = extract_peaks(gt);
        if (peaks.empty()) continue;
        GainMap pred = GainMap::zeros(gt.grid);
        for (double& v : pred.values) v = rng.uniform(0.0, 12.0);

        // keep every hinge term at least 1e-4 from its boundary
        bool clear = true;
        for (const GridCoord& p : peaks) {
            const GridCoord shifts[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (const GridCoord& d : shifts) {
                const int nx = p.gx + d.gx;
                const int ny = p.gy + d.gy;
                if (!pred.grid.contains(nx, ny)) continue;
                if (std::abs(pred.at(nx, ny) + margin - pred.at(p.gx, p.gy)) < 1e-4) {
                    clear = false;
                }
            }
        }
        if (!clear) continue;
        ++accepted;

        const auto grad = lpm_subgradient(pred, peaks, margin);
        GainMap work = pred;
        for (std::size_t i = 0; i < pred.values.size(); ++i) {
            work.values[i] = pred.values[i] + step;
            const double up = lpm_loss(work, peaks, margin);
            work.values[i] = pred.values[i] - step;
            const double down = lpm_loss(work, peaks, margin);
            work.values[i] = pred.values[i];
            const double fd = (up - down) / (2.0 * step);
            const double scale = std::max({std::abs(grad[i]), std::abs(fd), 1e-12});
            if (std::abs(grad[i] - fd) / scale >= 1e-4) {
                c.require(false, "cell " + std::to_string(i) + ": grad " + cli::fmt_g9(grad[i]) +
                                     " vs fd " + cli::fmt_g9(fd));
                return;
            }
        }
    }
    c.note("100 configurations");
}

// ---- 7 & 8. Clustered-dataset criteria ---------------------------------------

struct ClusteredRuns {
    std::vector<Scene> scenes;
    // per strategy: per scene reports at k_max
    std::vector<std::vector<CoverageReport>> reports;
    int k_max = 60;
};

const ClusteredRuns& clustered_runs() {
    static const ClusteredRuns runs = [] {
        ClusteredRuns r;
        cli::RunConfig config; // defaults: stride 64, patch 512, tau 0.5, M 6
        config.synthetic = true;
        r.scenes = make_cluster_dataset(100, ClusterSceneParams{}, 1);
        const cli::CliStrategy strategies[] = {
            cli::CliStrategy::SoftLinear, cli::CliStrategy::SoftGaussian,
            cli::CliStrategy::RigidNms, cli::CliStrategy::ExactGreedy};
        for (const auto strategy : strategies) {
            std::vector<CoverageReport> reports(r.scenes.size());
            cli::parallel_for(r.scenes.size(), 0, [&](std::size_t i) {
                const Scene& scene = r.scenes[i];
                const GridSpec grid = cli::grid_for(scene.extent, config.grid_stride);
                const PatchSelection sel =
                    cli::select_for_scene(strategy, scene, grid, config.patch, r.k_max,
                                          config.bins, config.criterion);
                reports[i] = evaluate_selection(scene.boxes, sel, config.criterion);
            });
            r.reports.push_back(std::move(reports));
        }
        return r;
    }();
    return runs;
}

double avg_rate_at(const ClusteredRuns& runs, std::size_t strategy, int budget) {
    double total = 0.0;
    for (std::size_t s = 0; s < runs.scenes.size(); ++s) {
        const auto& marginal = runs.reports[strategy][s].per_rank_marginal;
        int covered = 0;
        const std::size_t upto =
            std::min<std::size_t>(static_cast<std::size_t>(budget), marginal.size());
        for (std::size_t k = 0; k < upto; ++k) covered += marginal[k];
        total += runs.scenes[s].boxes.empty()
                     ? 1.0
                     : static_cast<double>(covered) / runs.scenes[s].boxes.size();
    }
    return total / static_cast<double>(runs.scenes.size());
}

void criterion_curve_shape(Criterion& c) {
    const ClusteredRuns& runs = clustered_runs();
    const double rate40 = avg_rate_at(runs, 0, 40);
    const double rate60 = avg_rate_at(runs, 0, 60);
    c.require(rate40 >= 0.95 * rate60, "curve not saturated: rate@40 " + cli::fmt_g9(rate40) +
                                           " < 0.95 * rate@60 " + cli::fmt_g9(rate60));

    int violations = 0;
    for (const auto& report : runs.reports[3]) { // exact greedy
        for (std::size_t k = 1; k < report.per_rank_marginal.size(); ++k) {
            if (report.per_rank_marginal[k] > report.per_rank_marginal[k - 1]) ++violations;
        }
    }
    c.require(violations == 0,
              std::to_string(violations) + " submodularity violations in exact greedy");
    c.note("rate@40/rate@60 = " + cli::fmt_g9(rate40 / rate60));
}

void criterion_strategy_ordering(Criterion& c) {
    const ClusteredRuns& runs = clustered_runs();
    const double linear = avg_rate_at(runs, 0, 40);
    const double gaussian = avg_rate_at(runs, 1, 40);
    const double rigid = avg_rate_at(runs, 2, 40);
    c.note("linear " + cli::fmt_g9(linear) + ", gaussian " + cli::fmt_g9(gaussian) + ", rigid " +
           cli::fmt_g9(rigid));
    c.require(linear >= gaussian, "linear < gaussian");
    c.require(gaussian >= rigid, "gaussian < rigid");
    c.require((linear - rigid) * 100.0 >= 2.0, "linear-rigid gap below 2 points");
}

// ---- 9. Coordinate projection ------------------------------------------------

void criterion_projection(Criterion& c) {
    const ImageExtent extent{8192, 8192};
    const PixelRect rect{3840, 3840, 4352, 4352};
    const AnchorBox local = project_anchor_to_patch({0.5, 0.5, 0.0, 0.0}, rect, extent);
    c.require(local.cx == 0.5 && local.cy == 0.5, "worked example not exact");

    DetRng rng(909090);
    double worst = 0.0;
    for (int t = 0; t < 100000; ++t) {
        const AnchorBox a{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        const double x1 = rng.uniform(0.0, 8000.0);
        const double y1 = rng.uniform(0.0, 8000.0);
        const PixelRect r{x1, y1, x1 + rng.uniform(0.5, 1200.0), y1 + rng.uniform(0.5, 1200.0)};
        const AnchorBox back =
            project_anchor_to_global(project_anchor_to_patch(a, r, extent), r, extent);
        worst = std::max({worst, std::abs(back.cx - a.cx), std::abs(back.cy - a.cy),
                          std::abs(back.w - a.w), std::abs(back.h - a.h)});
    }
    c.require(worst < 1e-9, "round-trip error " + cli::fmt_g9(worst));
    c.note("100000 pairs, worst error " + cli::fmt_g9(worst));
}

// ---- 10. Determinism of cmd_compare -------------------------------------------

void criterion_determinism(Criterion& c) {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "patchroute_acceptance";
    fs::remove_all(base);
    cli::RunConfig config;
    config.synthetic = true;
    config.synth_scenes = 100;
    config.seed = 1;

    for (const char* sub : {"run_a", "run_b"}) {
        config.out_dir = base / sub;
        std::ostringstream sink;
        auto* old = std::cout.rdbuf(sink.rdbuf());
        const int rc = cli::run_compare(config, std::nullopt);
        std::cout.rdbuf(old);
        c.require(rc == 0, std::string(sub) + " exited " + std::to_string(rc));
    }

    int compared = 0;
    for (const auto& entry : fs::directory_iterator(base / "run_a")) {
        if (entry.path().extension() != ".csv") continue;
        const fs::path other = base / "run_b" / entry.path().filename();
        c.require(fs::exists(other), "missing " + other.string());
        if (!fs::exists(other)) continue;
        std::ifstream fa(entry.path(), std::ios::binary);
        std::ifstream fb(other, std::ios::binary);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str() != sb.str()) {
            c.require(false, entry.path().filename().string() + " differs between runs");
        }
        ++compared;
    }
    c.require(compared >= 13, "only " + std::to_string(compared) + " CSVs compared");
    c.note(std::to_string(compared) + " CSV files byte-identical");
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    run(1, "algorithm hand-trace fixtures", 1.0, criterion_hand_traces);
    run(2, "greedy approximation bound", 60.0, criterion_greedy_bound);
    run(3, "fast/naive gain-map equivalence", 120.0, criterion_fast_naive);
    run(4, "kernel and selection invariants", 30.0, criterion_invariants);
    run(5, "bin-distribution decoding", 0.0, criterion_decoding);
    run(6, "peak-margin subgradient check", 0.0, criterion_lpm_gradient);
    run(7, "coverage curve saturation", 120.0, criterion_curve_shape);
    run(8, "strategy ordering", 0.0, criterion_strategy_ordering);
    run(9, "anchor projection round-trip", 0.0, criterion_projection);
    run(10, "compare determinism", 0.0, criterion_determinism);

    if (g_failures == 0) {
        std::printf("all 10 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
