#include "patchroute/coverage.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace patchroute {

namespace {

// Per-candidate coverage as box-index bitsets (words of 64).
std::vector<std::vector<std::uint64_t>> cover_bitsets(std::span<const BBox> boxes,
                                                      std::span<const PixelRect> candidates,
                                                      double threshold) {
    const std::size_t words = (boxes.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> sets(candidates.size(),
                                                 std::vector<std::uint64_t>(words, 0));
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            if (iof(boxes[b], candidates[c]) >= threshold) {
                sets[c][b / 64] |= std::uint64_t(1) << (b % 64);
            }
        }
    }
    return sets;
}

int popcount_and_not(const std::vector<std::uint64_t>& cand,
                     const std::vector<std::uint64_t>& covered) {
    int n = 0;
    for (std::size_t w = 0; w < cand.size(); ++w) {
        n += std::popcount(cand[w] & ~covered[w]);
    }
    return n;
}

} // namespace

std::set<std::int64_t> covered_set(std::span<const BBox> boxes, std::span<const PixelRect> rects,
                                   const CoverageCriterion& criterion) {
    std::set<std::int64_t> covered;
    for (const BBox& box : boxes) {
        for (const PixelRect& rect : rects) {
            if (iof(box, rect) >= criterion.iof_threshold) {
                covered.insert(box.instance_id);
                break;
            }
        }
    }
    return covered;
}

GreedyCoverResult greedy_exact_cover(std::span<const BBox> boxes,
                                     std::span<const PixelRect> candidates, int budget,
                                     const CoverageCriterion& criterion) {
    if (budget < 0 || static_cast<std::size_t>(budget) > candidates.size()) {
        throw std::invalid_argument("greedy_exact_cover: budget " + std::to_string(budget) +
                                    " exceeds " + std::to_string(candidates.size()) +
                                    " candidates");
    }
    const auto sets = cover_bitsets(boxes, candidates, criterion.iof_threshold);
    const std::size_t words = (boxes.size() + 63) / 64;
    std::vector<std::uint64_t> covered(words, 0);
    std::vector<char> used(candidates.size(), 0);

    GreedyCoverResult result;
    for (int k = 0; k < budget; ++k) {
        std::size_t best = 0;
        int best_gain = -1;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (used[c]) continue;
            const int gain = popcount_and_not(sets[c], covered);
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        used[best] = 1;
        for (std::size_t w = 0; w < words; ++w) covered[w] |= sets[best][w];
        result.chosen.push_back(best);
        result.marginal.push_back(best_gain);
    }
    return result;
}

OptimalCover brute_force_optimal(const SmallInstance& instance,
                                 const CoverageCriterion& criterion) {
    if (instance.boxes.size() > SmallInstance::kMaxBoxes ||
        instance.candidates.size() > SmallInstance::kMaxCandidates ||
        instance.budget > SmallInstance::kMaxBudget || instance.budget < 1 ||
        static_cast<std::size_t>(instance.budget) > instance.candidates.size()) {
        throw std::invalid_argument("brute_force_optimal: instance exceeds small-instance bounds");
    }
    // <= 20 boxes fit one word.
    std::vector<std::uint64_t> sets(instance.candidates.size(), 0);
    for (std::size_t c = 0; c < instance.candidates.size(); ++c) {
        for (std::size_t b = 0; b < instance.boxes.size(); ++b) {
            if (iof(instance.boxes[b], instance.candidates[c]) >= criterion.iof_threshold) {
                sets[c] |= std::uint64_t(1) << b;
            }
        }
    }

    const std::size_t n = instance.candidates.size();
    const int k = instance.budget;
    std::vector<std::size_t> pick(static_cast<std::size_t>(k));
    OptimalCover best;
    best.covered = -1;

    // Lexicographic enumeration of k-combinations; strict improvement keeps
    // the first (lexicographically smallest) maximizer.
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    while (true) {
        std::uint64_t mask = 0;
        for (std::size_t i : idx) mask |= sets[i];
        const int covered = std::popcount(mask);
        if (covered > best.covered) {
            best.covered = covered;
            best.subset = idx;
        }
        // next combination
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - static_cast<std::size_t>(k - pos)) {
            --pos;
        }
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return best;
}

CoverageReport evaluate_selection(std::span<const BBox> boxes, const PatchSelection& selection,
                                  const CoverageCriterion& criterion) {
    CoverageReport report;
    report.total_objects = static_cast<int>(boxes.size());
    report.per_rank_marginal.assign(selection.entries.size(), 0);
    for (const BBox& box : boxes) {
        for (const PatchSelection::Entry& entry : selection.entries) {
            if (iof(box, entry.rect) >= criterion.iof_threshold) {
                ++report.per_rank_marginal[static_cast<std::size_t>(entry.rank - 1)];
                ++report.covered_objects;
                break; // attributed to the earliest covering rank
            }
        }
    }
    report.rate = report.total_objects == 0
                      ? 1.0
                      : static_cast<double>(report.covered_objects) / report.total_objects;
    report.per_image_rates = {report.rate};
    return report;
}

CoverageReport aggregate_reports(std::span<const CoverageReport> reports) {
    CoverageReport total;
    for (const CoverageReport& r : reports) {
        total.total_objects += r.total_objects;
        total.covered_objects += r.covered_objects;
        if (r.per_rank_marginal.size() > total.per_rank_marginal.size()) {
            total.per_rank_marginal.resize(r.per_rank_marginal.size(), 0);
        }
        for (std::size_t i = 0; i < r.per_rank_marginal.size(); ++i) {
            total.per_rank_marginal[i] += r.per_rank_marginal[i];
        }
        total.per_image_rates.insert(total.per_image_rates.end(), r.per_image_rates.begin(),
                                     r.per_image_rates.end());
    }
    total.rate = total.total_objects == 0
                     ? 1.0
                     : static_cast<double>(total.covered_objects) / total.total_objects;
    return total;
}

PatchSelection exact_greedy_select(std::span<const BBox> boxes, const GridSpec& grid,
                                   const PatchSpec& patch, int budget,
                                   const CoverageCriterion& criterion) {
    if (budget < 1 || budget > grid.cell_count()) {
        throw std::invalid_argument("exact_greedy_select: budget outside [1, cell count]");
    }
    // Sparse per-cell covered-box lists; only cells near some box are touched.
    const double sx = grid.stride_x();
    const double sy = grid.stride_y();
    const double half_w = patch.patch_w_px / 2.0;
    const double half_h = patch.patch_h_px / 2.0;
    std::vector<std::vector<std::int32_t>> cell_boxes(
        static_cast<std::size_t>(grid.cell_count()));
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        const BBox& box = boxes[b];
        const int x_lo = std::clamp(
            static_cast<int>(std::floor((box.x_min - half_w) / sx - 0.5)), 0, grid.grid_w - 1);
        const int x_hi = std::clamp(
            static_cast<int>(std::ceil((box.x_max + half_w) / sx - 0.5)), 0, grid.grid_w - 1);
        const int y_lo = std::clamp(
            static_cast<int>(std::floor((box.y_min - half_h) / sy - 0.5)), 0, grid.grid_h - 1);
        const int y_hi = std::clamp(
            static_cast<int>(std::ceil((box.y_max + half_h) / sy - 0.5)), 0, grid.grid_h - 1);
        for (int gy = y_lo; gy <= y_hi; ++gy) {
            for (int gx = x_lo; gx <= x_hi; ++gx) {
                if (iof(box, patch_rect_at(grid, patch, gx, gy)) >= criterion.iof_threshold) {
                    cell_boxes[grid.index(gx, gy)].push_back(static_cast<std::int32_t>(b));
                }
            }
        }
    }

    std::vector<char> covered(boxes.size(), 0);
    std::vector<char> used(cell_boxes.size(), 0);
    PatchSelection selection;
    selection.entries.reserve(static_cast<std::size_t>(budget));
    for (int k = 1; k <= budget; ++k) {
        std::size_t best = 0;
        int best_gain = -1;
        for (std::size_t c = 0; c < cell_boxes.size(); ++c) {
            if (used[c]) continue;
            int gain = 0;
            for (std::int32_t b : cell_boxes[c]) {
                gain += covered[static_cast<std::size_t>(b)] ? 0 : 1;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        used[best] = 1;
        for (std::int32_t b : cell_boxes[best]) covered[static_cast<std::size_t>(b)] = 1;
        const int gx = static_cast<int>(best) % grid.grid_w;
        const int gy = static_cast<int>(best) / grid.grid_w;
        selection.entries.push_back({k, gx, gy, static_cast<double>(best_gain),
                                     patch_rect_at(grid, patch, gx, gy)});
    }
    return selection;
}

std::vector<double> coverage_curve(std::span<const Scene> scenes, const SceneSelector& selector,
                                   int k_max, const CoverageCriterion& criterion) {
    if (k_max < 1) {
        throw std::invalid_argument("coverage_curve: k_max must be >= 1");
    }
    std::vector<double> rate_sums(static_cast<std::size_t>(k_max), 0.0);
    for (const Scene& scene : scenes) {
        const PatchSelection selection = selector(scene);
        const CoverageReport report = evaluate_selection(scene.boxes, selection, criterion);
        int covered_so_far = 0;
        for (int k = 1; k <= k_max; ++k) {
            if (static_cast<std::size_t>(k) <= report.per_rank_marginal.size()) {
                covered_so_far += report.per_rank_marginal[static_cast<std::size_t>(k - 1)];
            }
            const double rate = scene.boxes.empty()
                                    ? 1.0
                                    : static_cast<double>(covered_so_far) / scene.boxes.size();
            rate_sums[static_cast<std::size_t>(k - 1)] += rate;
        }
    }
    if (!scenes.empty()) {
        for (double& r : rate_sums) r /= static_cast<double>(scenes.size());
    }
    return rate_sums;
}

} // namespace patchroute
