#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qaeval/pauc.hpp"
#include "qaeval/score_data.hpp"

namespace qaeval {

// Inclusive range expanded by integer step indices: count =
// round((hi - lo)/step) + 1 values lo + k*step, avoiding repeated float
// addition drift.
struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

std::vector<double> expand_range(const ValueRange& range);

struct GridConfig {
    std::vector<double> starting_errors; // targets, each in (0, 1)
    std::vector<double> pauc_limits;     // each in (0, 1)
};

void validate(const GridConfig& config);

// Key-value text:   starting_errors = {0.01, 0.10, 0.01}
//                   pauc_limits = [0.01, 0.05, 0.20]
// {lo, hi, step} expands a range, [...] lists explicit values.
GridConfig parse_grid_config(std::istream& source, const std::string& source_name = "<stream>");

// Cartesian product, starting error outer, limit inner.
std::vector<std::pair<double, double>> build_grid(const GridConfig& config);

struct GridCell {
    double starting_error_target = 0.0;
    double starting_error_achieved = 0.0;
    double pauc_limit = 0.0;
    // Relative ranking of the cell: algorithm -> placement p in [0, 1].
    std::map<std::string, double> placements;
    std::map<std::string, double> raw_paucs;
};

struct RankingGrid {
    std::vector<std::string> algorithms; // sorted; identical in every cell
    std::vector<GridCell> cells;
};

// Runs the full FNM-EDC pipeline for every grid cell: threshold per starting
// error, one curve + pAUC per algorithm, min-max normalised placements.
// Cells are evaluated independently; `threads` > 1 parallelises with output
// identical to the serial order.
RankingGrid evaluate_grid(const QualityScoreTable& table, const ComparisonSet& mated,
                          const GridConfig& config, Interpolation interpolation = Interpolation::stepwise,
                          unsigned threads = 1);

// Per-cell divergence sum_i |p_i - mean_i| against the mean placement of each
// algorithm over all cells. Values in [0, n].
std::vector<double> ranking_divergence_mean(const RankingGrid& grid);

// Per-cell divergence sum_i |p_i - e_i| against expected placements. Throws
// ValidationError when an algorithm is missing from `expected`.
std::vector<double> ranking_divergence_expected(const RankingGrid& grid,
                                                const std::map<std::string, double>& expected);

// Statistics of the scaled placements 1 + (n-1)*p (range [1, n]) across all
// cells. Medians over an even cell count use the mean of the two central
// values; std_dev is the population standard deviation.
struct PlacementStats {
    double span = 0.0;
    double best = 0.0;  // min
    double worst = 0.0; // max
    double median = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;
};

std::map<std::string, PlacementStats> placement_stats(const RankingGrid& grid);

} // namespace qaeval
