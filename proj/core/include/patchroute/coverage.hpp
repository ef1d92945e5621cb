#pragma once

#include "patchroute/dataset.hpp"
#include "patchroute/router.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

namespace patchroute {

/// An object counts as covered when some selected rect reaches this IoF.
struct CoverageCriterion {
    double iof_threshold = 0.5;
};

/// Instance ids of boxes whose best IoF against any rect reaches the threshold.
std::set<std::int64_t> covered_set(std::span<const BBox> boxes, std::span<const PixelRect> rects,
                                   const CoverageCriterion& criterion);

/// Classic greedy for maximum coverage over an explicit candidate list: each
/// step takes the candidate covering the most not-yet-covered objects, ties
/// broken by smallest candidate index. marginal[k] is the number of objects
/// newly covered by step k. Throws std::invalid_argument when the budget
/// exceeds the candidate count.
struct GreedyCoverResult {
    std::vector<std::size_t> chosen;
    std::vector<int> marginal;

    int covered() const {
        int total = 0;
        for (int m : marginal) total += m;
        return total;
    }
};

GreedyCoverResult greedy_exact_cover(std::span<const BBox> boxes,
                                     std::span<const PixelRect> candidates, int budget,
                                     const CoverageCriterion& criterion);

/// Instance small enough for exhaustive enumeration.
struct SmallInstance {
    std::vector<BBox> boxes;        // <= 20
    std::vector<PixelRect> candidates; // <= 16
    int budget = 1;                 // <= 5

    static constexpr int kMaxBoxes = 20;
    static constexpr int kMaxCandidates = 16;
    static constexpr int kMaxBudget = 5;
};

/// Enumerates every budget-sized candidate subset and returns the best
/// coverage with the lexicographically smallest achieving subset. Throws
/// std::invalid_argument when the instance exceeds SmallInstance bounds.
struct OptimalCover {
    int covered = 0;
    std::vector<std::size_t> subset;
};

OptimalCover brute_force_optimal(const SmallInstance& instance,
                                 const CoverageCriterion& criterion);

/// Coverage bookkeeping for one selection (or, after aggregation, a dataset).
/// rate is covered/total, by convention 1 when there are no objects.
/// per_rank_marginal[k] counts objects first covered by the rank-(k+1) patch.
struct CoverageReport {
    int total_objects = 0;
    int covered_objects = 0;
    double rate = 1.0;
    std::vector<int> per_rank_marginal;
    std::vector<double> per_image_rates;
};

CoverageReport evaluate_selection(std::span<const BBox> boxes, const PatchSelection& selection,
                                  const CoverageCriterion& criterion);

CoverageReport aggregate_reports(std::span<const CoverageReport> reports);

/// Exact-coverage greedy phrased as a routing strategy: candidates are all
/// grid cells' patch rects, scores are the integer marginal gains. Matches
/// greedy_exact_cover on the same candidate list (row-major tie order).
PatchSelection exact_greedy_select(std::span<const BBox> boxes, const GridSpec& grid,
                                   const PatchSpec& patch, int budget,
                                   const CoverageCriterion& criterion);

/// Average coverage rate for budgets 1..k_max. The selector runs once per
/// scene at budget k_max; smaller budgets are its prefixes (all greedy
/// strategies here are prefix-nested), so the curve comes from one pass over
/// the per-rank marginals.
using SceneSelector = std::function<PatchSelection(const Scene&)>;

std::vector<double> coverage_curve(std::span<const Scene> scenes, const SceneSelector& selector,
                                   int k_max, const CoverageCriterion& criterion);

} // namespace patchroute
