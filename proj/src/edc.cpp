#include "qaeval/edc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "qaeval/errors.hpp"
#include "qaeval/synthetic.hpp"

namespace qaeval {

const char* to_string(ErrorMode mode) {
    return mode == ErrorMode::without_discarded ? "without_discarded" : "with_discarded";
}

ErrorMode error_mode_from_string(const std::string& token) {
    if (token == "without_discarded" || token == "without") {
        return ErrorMode::without_discarded;
    }
    if (token == "with_discarded" || token == "with") {
        return ErrorMode::with_discarded;
    }
    throw ParseError("unknown error mode '" + token + "'");
}

bool is_comparison_error(ComparisonKind kind, double comparison_score, double threshold) {
    // False non-match: CS strictly below the threshold. False match: CS at or
    // above it. Strictness is fixed here once and used everywhere.
    return kind == ComparisonKind::mated ? comparison_score < threshold
                                         : comparison_score >= threshold;
}

namespace {

// Candidate thresholds are the distinct scores themselves, plus one value
// just above the maximum for the all-error case.
ThresholdResult pick_threshold(std::span<const double> scores, double target, bool fnmr) {
    if (scores.empty()) {
        throw ValidationError("cannot derive a threshold from an empty score list");
    }
    if (!(target >= 0.0 && target <= 1.0)) {
        throw ValidationError("target starting error must be in [0, 1]");
    }
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    ThresholdResult best;
    bool have_best = false;
    auto consider = [&](double threshold, double achieved) {
        if (achieved > target + 0.0) {
            return;
        }
        // Largest achievable error wins; the candidate sweep visits each
        // achievable error exactly once.
        if (!have_best || achieved > best.achieved_starting_error) {
            best = {threshold, achieved};
            have_best = true;
        }
    };

    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) {
            continue; // same cut point
        }
        if (fnmr) {
            // Threshold = sorted[i]: errors are the i scores strictly below.
            consider(sorted[i], static_cast<double>(i) / n);
        } else {
            // FMR: errors are the scores at or above the threshold.
            consider(sorted[i], static_cast<double>(sorted.size() - i) / n);
        }
    }
    // Above the maximum: FNMR 1, FMR 0.
    const double above_max = std::nextafter(sorted.back(), std::numeric_limits<double>::infinity());
    consider(above_max, fnmr ? 1.0 : 0.0);

    if (!have_best) {
        // Unreachable for FNMR (0 is always achievable); FMR target below the
        // smallest achievable non-zero rate still admits 0 via above_max.
        throw ValidationError("no achievable starting error at or below the target");
    }
    return best;
}

} // namespace

ThresholdResult threshold_for_starting_error(std::span<const double> mated_scores, double target) {
    return pick_threshold(mated_scores, target, /*fnmr=*/true);
}

ThresholdResult threshold_for_starting_fmr(std::span<const double> nonmated_scores, double target) {
    return pick_threshold(nonmated_scores, target, /*fnmr=*/false);
}

EdcCurve compute_edc_presorted(const ComparisonSet& comparisons, std::span<const double> pairwise_qs,
                               std::span<const std::size_t> ascending_order, double threshold,
                               ErrorMode mode) {
    const std::size_t n = comparisons.size();
    if (n == 0) {
        throw ValidationError("cannot compute an EDC curve from an empty comparison set");
    }
    if (pairwise_qs.size() != n || ascending_order.size() != n) {
        throw ValidationError("pairwise QS list not aligned with the comparison set");
    }
    const ComparisonKind kind = comparisons.single_kind();

    std::size_t errors_remaining = 0;
    for (const Comparison& c : comparisons.comparisons) {
        errors_remaining += is_comparison_error(kind, c.comparison_score, threshold) ? 1 : 0;
    }

    EdcCurve curve;
    curve.threshold = threshold;
    curve.error_mode = mode;
    curve.total_comparisons = n;

    const double total = static_cast<double>(n);
    std::size_t remaining = n;
    auto emit = [&]() {
        const double denom = mode == ErrorMode::without_discarded ? static_cast<double>(remaining) : total;
        curve.points.push_back({static_cast<double>(n - remaining) / total,
                                static_cast<double>(errors_remaining) / denom});
    };
    emit(); // discard fraction 0

    // Discard the whole group sharing the next lowest pairwise QS per step;
    // the step that empties the set yields no point.
    std::size_t i = 0;
    while (i < n) {
        const double level = pairwise_qs[ascending_order[i]];
        while (i < n && pairwise_qs[ascending_order[i]] == level) {
            const Comparison& c = comparisons.comparisons[ascending_order[i]];
            if (is_comparison_error(kind, c.comparison_score, threshold)) {
                --errors_remaining;
            }
            --remaining;
            ++i;
        }
        if (remaining == 0) {
            break;
        }
        emit();
    }

    curve.starting_error = curve.points.front().error;
    return curve;
}

EdcCurve compute_edc(const ComparisonSet& comparisons, std::span<const double> pairwise_qs,
                     double threshold, ErrorMode mode) {
    if (pairwise_qs.size() != comparisons.size()) {
        throw ValidationError("pairwise QS list not aligned with the comparison set");
    }
    std::vector<std::size_t> order(comparisons.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pairwise_qs[a] < pairwise_qs[b]; });
    return compute_edc_presorted(comparisons, pairwise_qs, order, threshold, mode);
}

double curve_value_at(const EdcCurve& curve, double x) {
    if (!(x >= 0.0) || x >= 1.0) {
        throw ValidationError("discard fraction outside [0, 1)");
    }
    if (curve.points.empty()) {
        throw ValidationError("empty curve");
    }
    // Last point with discard_fraction <= x.
    auto it = std::upper_bound(curve.points.begin(), curve.points.end(), x,
                               [](double v, const EdcPoint& p) { return v < p.discard_fraction; });
    return std::prev(it)->error;
}

double theoretical_best_error(double starting_error, double x) {
    return std::max(0.0, starting_error - x);
}

EdcCurve random_baseline(const ComparisonSet& comparisons, double threshold, std::size_t n_trials,
                         std::uint64_t seed, ErrorMode mode) {
    if (n_trials < 1) {
        throw ValidationError("random baseline needs at least one trial");
    }
    const std::size_t n = comparisons.size();

    std::vector<EdcCurve> trials;
    trials.reserve(n_trials);
    std::vector<double> qs(n);
    std::set<double> fractions;
    for (std::size_t t = 0; t < n_trials; ++t) {
        for (std::size_t c = 0; c < n; ++c) {
            qs[c] = CounterRng::uniform01(seed, t, c);
        }
        trials.push_back(compute_edc(comparisons, qs, threshold, mode));
        for (const EdcPoint& p : trials.back().points) {
            fractions.insert(p.discard_fraction);
        }
    }

    EdcCurve mean;
    mean.threshold = threshold;
    mean.error_mode = mode;
    mean.total_comparisons = n;
    mean.points.reserve(fractions.size());
    for (double x : fractions) {
        mean.points.push_back({x, 0.0});
    }
    // Merge walk per trial: union fractions and trial points are both sorted.
    for (const EdcCurve& trial : trials) {
        std::size_t j = 0;
        double value = trial.points.front().error;
        for (EdcPoint& p : mean.points) {
            while (j < trial.points.size() && trial.points[j].discard_fraction <= p.discard_fraction) {
                value = trial.points[j].error;
                ++j;
            }
            p.error += value;
        }
    }
    for (EdcPoint& p : mean.points) {
        p.error /= static_cast<double>(n_trials);
    }
    mean.starting_error = mean.points.front().error;
    return mean;
}

} // namespace qaeval
