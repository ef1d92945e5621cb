#pragma once

#include "run_config.hpp"

#include <iosfwd>
#include <optional>

namespace patchroute::cli {

// Each command returns the process exit code: 0 ok, 1 validation/assertion
// failure. IO and configuration problems are thrown and mapped to 2 in main.

int run_gainmap(const RunConfig& config, const std::filesystem::path& annotations);
int run_route(const RunConfig& config, const std::vector<std::filesystem::path>& map_files);
int run_compare(const RunConfig& config,
                const std::optional<std::filesystem::path>& annotations);
int run_oracle(const RunConfig& config, int trials);
int run_tile(const RunConfig& config, const std::filesystem::path& annotations);
int run_curve(const RunConfig& config, const std::optional<std::filesystem::path>& annotations);

// Shared pieces, exposed for the test suites.
std::vector<Scene> load_scenes(const RunConfig& config,
                               const std::optional<std::filesystem::path>& annotations);
PatchSelection select_for_scene(CliStrategy strategy, const Scene& scene, const GridSpec& grid,
                                const PatchSpec& patch, int budget, const BinConfig& bins,
                                const CoverageCriterion& criterion);
void write_selection_csv(std::ostream& out, const PatchSelection& selection);

} // namespace patchroute::cli
