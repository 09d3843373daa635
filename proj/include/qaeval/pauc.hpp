#pragma once

#include <map>
#include <string>
#include <vector>

#include "qaeval/edc.hpp"

namespace qaeval {

enum class Interpolation { stepwise, linear };

const char* to_string(Interpolation interpolation);
Interpolation interpolation_from_string(const std::string& token);

struct PaucConfig {
    // Fixed to 0; kept as a field for forward compatibility. Non-zero values
    // are rejected.
    double discard_lower = 0.0;
    double discard_limit = 0.2;
    Interpolation interpolation = Interpolation::stepwise;
};

// Throws ValidationError unless discard_lower == 0 and discard_limit in (0, 1].
void validate(const PaucConfig& config);

// Area under the curve over [0, discard_limit]. Stepwise: rectangles of
// width x left-point error; linear: trapezoids over the same clipped points
// with a constant tail after the last point.
double pauc(const EdcCurve& curve, const PaucConfig& config);
double pauc(std::span<const EdcPoint> points, const PaucConfig& config);

// Area under max(0, starting_error - x) over [0, limit]: the part of the
// pAUC that cannot possibly be improved.
double area_under_theoretical_best(double starting_error, double limit);

// Area under the constant starting-error line (the soft worst case a QA
// algorithm should never exceed): starting_error * limit.
double upper_bound_pauc(double starting_error, double limit);

struct RankingEntry {
    std::string algorithm;
    double raw_pauc = 0.0;
    // raw minus area_under_theoretical_best; a constant shift that never
    // changes the ranking.
    double adjusted_pauc = 0.0;
    // Min-max normalised pAUC: 0 = best, 1 = worst. 0 for all when the pAUCs
    // are all equal.
    double relative_rank = 0.0;
    // Competition ranking, 1 = best; ties share the smaller rank.
    int discrete_rank = 1;
};

struct RankingReport {
    std::vector<RankingEntry> entries; // sorted by discrete rank, then name
    double starting_error = 0.0;
    double achieved_starting_error = 0.0;
    PaucConfig config;
};

// Rankings are always computed from the raw pAUC values; the adjustment is
// reported alongside for interpretability.
RankingReport rank(const std::map<std::string, double>& paucs, double starting_error,
                   const PaucConfig& config);

} // namespace qaeval
