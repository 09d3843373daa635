#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qaeval/score_data.hpp"

namespace qaeval {

// Error computation for a curve point. "without_discarded" divides the error
// count by the remaining comparisons and is the default; "with_discarded"
// divides by the constant total and cannot show increasing errors.
enum class ErrorMode { without_discarded, with_discarded };

const char* to_string(ErrorMode mode);
ErrorMode error_mode_from_string(const std::string& token);

struct EdcPoint {
    double discard_fraction = 0.0;
    double error = 0.0;
};

// Step curve: the error value holds from each point's discard fraction until
// the next point. Discard fractions are strictly increasing, start at 0, and
// are always k/total_comparisons for integer k. No point exists at discard
// fraction 1 (the error is undefined on an empty set).
struct EdcCurve {
    std::vector<EdcPoint> points;
    double starting_error = 0.0;
    double threshold = 0.0;
    ErrorMode error_mode = ErrorMode::without_discarded;
    std::size_t total_comparisons = 0;
};

struct ThresholdResult {
    double threshold = 0.0;
    // Fraction of mated scores strictly below the threshold.
    double achieved_starting_error = 0.0;
};

// Decision rules, used consistently everywhere: a mated comparison is a false
// non-match iff CS < threshold; a non-mated comparison is a false match iff
// CS >= threshold.
bool is_comparison_error(ComparisonKind kind, double comparison_score, double threshold);

// Largest achievable FNMR <= target, with the smallest comparison score
// realising it as the threshold (min score when the FNMR is 0). Target 1 is
// realised by a threshold just above the maximum score.
ThresholdResult threshold_for_starting_error(std::span<const double> mated_scores, double target);

// FM counterpart for FM-EDC runs: largest achievable FMR <= target
// (FMR = fraction of scores >= threshold), smallest threshold realising it.
ThresholdResult threshold_for_starting_fmr(std::span<const double> nonmated_scores, double target);

// Progressively discards comparisons in increasing pairwise-QS order. All
// comparisons sharing the next lowest pairwise QS are discarded in one step;
// each step emits one data point, except the step that empties the set.
// `comparisons` must be of a single kind and aligned with `pairwise_qs`.
EdcCurve compute_edc(const ComparisonSet& comparisons, std::span<const double> pairwise_qs,
                     double threshold, ErrorMode mode);

// Same, with a precomputed permutation sorting pairwise_qs ascending. Lets a
// caller sweeping thresholds over fixed scores sort once.
EdcCurve compute_edc_presorted(const ComparisonSet& comparisons, std::span<const double> pairwise_qs,
                               std::span<const std::size_t> ascending_order, double threshold,
                               ErrorMode mode);

// Stepwise, right-constant evaluation: error of the last point with
// discard_fraction <= x. Throws ValidationError for x outside [0, 1).
double curve_value_at(const EdcCurve& curve, double x);

// Hard lower bound: max(0, starting_error - x).
double theoretical_best_error(double starting_error, double x);

// Mean of n_trials EDC curves computed from i.i.d. uniform random pairwise
// QSs (fresh per trial, deterministic per seed), sampled stepwise on the
// union of all trial discard fractions. Approximates the constant
// starting-error line.
EdcCurve random_baseline(const ComparisonSet& comparisons, double threshold,
                         std::size_t n_trials, std::uint64_t seed, ErrorMode mode);

} // namespace qaeval
