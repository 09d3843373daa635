#pragma once

#include <span>
#include <string>
#include <vector>

#include "qaeval/edc.hpp"
#include "qaeval/pauc.hpp"

namespace qaeval {

enum class CalibrationFunction { minmax, proportional };
enum class CalibrationVariant { same, other, combined };

const char* to_string(CalibrationFunction function);
CalibrationFunction calibration_function_from_string(const std::string& token);
const char* to_string(CalibrationVariant variant);
CalibrationVariant calibration_variant_from_string(const std::string& token);

// The 100 thresholds separating the 101 integer bins of the [0, 100] range.
struct BinBoundaries {
    std::vector<double> boundaries; // exactly 100, non-decreasing
    CalibrationFunction calibration_function = CalibrationFunction::minmax;
};

// boundary_i = min + i*(max - min)/101 for i = 1..100: 101 equal-width bins
// spanning [min, max]. Calibration values other than the extremes have no
// effect. Throws ValidationError when all calibration values are equal.
BinBoundaries calibrate_minmax(std::span<const double> calibration_qs);

// boundary_i = empirical quantile of the calibration multiset at i/101
// (linear interpolation between order statistics), so approximately the same
// number of calibration QSs maps to each bin.
BinBoundaries calibrate_proportional(std::span<const double> calibration_qs);

// Bin of a raw score: the count of boundaries strictly below q, so a value
// sitting exactly on tied boundaries falls in the lower bin and a degenerate
// calibration maps its own value to 0. Out-of-range values clamp to 0 or 100.
int apply_normalisation(double q, const BinBoundaries& b);

// Assembles a calibration multiset: same = evaluation scores, other = the
// other dataset's scores, combined = multiset union of both.
std::vector<double> calibration_scores(CalibrationVariant variant,
                                       std::span<const double> same_scores,
                                       std::span<const double> other_scores);

// 100 * (stepwise area between the curves over [0, limit]) / pauc(raw_curve),
// in percent; always >= 0. Both curves must come from the same comparisons
// and threshold. Throws ValidationError when the raw pAUC is 0.
double curve_divergence(const EdcCurve& raw_curve, const EdcCurve& normalised_curve,
                        const PaucConfig& config);

} // namespace qaeval
