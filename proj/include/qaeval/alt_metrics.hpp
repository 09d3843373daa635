#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qaeval/score_data.hpp"

namespace qaeval {

enum class ScalarKind { mean_cs, d_prime, fnmr_at_fixed_fmr };

const char* to_string(ScalarKind kind);

struct ScalarPoint {
    double discard_fraction = 0.0;
    double value = 0.0;
};

// Same stepwise semantics and tie rules as EdcCurve, with a metric value
// instead of an error on the Y axis.
struct ScalarCurve {
    std::vector<ScalarPoint> points;
    ScalarKind value_kind = ScalarKind::mean_cs;
    // fnmr_at_fixed_fmr only: the FMR actually achieved at each point
    // (parallel to `points`) and the configured target.
    std::vector<double> achieved_fmr;
    double fmr_target = 0.0;
};

// Mean comparison score of the remaining comparisons per discard step.
// Single-kind sets only: mated and non-mated comparisons have inherently
// different CS distributions.
ScalarCurve cs_dc(const ComparisonSet& comparisons, std::span<const double> pairwise_qs);

// d' = (mean_mated - mean_nonmated)/sqrt(var_nonmated + var_mated) on the
// remaining similarity scores (population variances); equivalent to the
// dissimilarity-score formulation with both means negated. Discards proceed
// jointly over the merged pairwise-QS order; points are emitted only while
// both kinds remain. Throws ValidationError naming the discard fraction when
// both variances vanish at a step.
ScalarCurve dprime_dc(const ComparisonSet& mated, const ComparisonSet& nonmated,
                      std::span<const double> mated_qs, std::span<const double> nonmated_qs);

// Per joint discard step, re-selects the smallest CS threshold whose FMR on
// the remaining non-mated scores is <= fixed_fmr_target, then plots the FNMR
// of the remaining mated comparisons at that threshold. The curve ends when
// either kind runs out.
ScalarCurve fc_edc(const ComparisonSet& mated, const ComparisonSet& nonmated,
                   std::span<const double> mated_qs, std::span<const double> nonmated_qs,
                   double fixed_fmr_target);

enum class CorrelationMethod { pearson, spearman };

const char* to_string(CorrelationMethod method);
CorrelationMethod correlation_method_from_string(const std::string& token);

// Pearson product-moment, or Spearman as Pearson on fractional ranks (ties
// share the mean rank). Throws ValidationError on zero variance.
double qs_cs_correlation(std::span<const double> x, std::span<const double> y,
                         CorrelationMethod method);

// Pearson between the pairwise QS and the 0/1 error proxy (1 = non-error
// under the kind's decision rule). Throws ValidationError when the outcomes
// are all-error or all-non-error.
double error_proxy_correlation(std::span<const double> pairwise_qs, const ComparisonSet& comparisons,
                               double threshold);

// d'-style per-sample utility: (mean mated - mean nonmated)/sqrt(sum of
// population variances) over the similarity scores of comparisons involving
// the sample. A stand-in, not a reproduction of any published definition;
// reports label it "d'-style utility".
struct SampleUtilities {
    std::map<std::string, double> utilities;
    // Samples omitted for a missing comparison kind or zero combined
    // variance, with the reason.
    std::vector<std::pair<std::string, std::string>> omitted;
};

SampleUtilities sample_utility_scores(const ComparisonSet& mated, const ComparisonSet& nonmated);

// DET curve of the comparisons remaining at one pairwise-QS threshold:
// (FMR, FNMR) swept over every distinct remaining CS as decision threshold.
struct DetCurve {
    double qs_threshold = 0.0;
    std::vector<std::pair<double, double>> points; // (fmr, fnmr)
};

struct DetVsDiscardResult {
    std::vector<DetCurve> curves;
    // QS thresholds skipped because they left either kind empty.
    std::vector<double> skipped_thresholds;
};

DetVsDiscardResult det_vs_discard(const ComparisonSet& mated, const ComparisonSet& nonmated,
                                  std::span<const double> mated_qs, std::span<const double> nonmated_qs,
                                  std::span<const double> qs_thresholds);

} // namespace qaeval
