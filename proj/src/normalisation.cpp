#include "qaeval/normalisation.hpp"

#include <algorithm>
#include <cmath>

#include "qaeval/errors.hpp"

namespace qaeval {

namespace {

constexpr int kBinCount = 101;      // normalised integers 0..100
constexpr int kBoundaryCount = 100; // thresholds between the bins

} // namespace

const char* to_string(CalibrationFunction function) {
    return function == CalibrationFunction::minmax ? "minmax" : "proportional";
}

CalibrationFunction calibration_function_from_string(const std::string& token) {
    if (token == "minmax") {
        return CalibrationFunction::minmax;
    }
    if (token == "proportional") {
        return CalibrationFunction::proportional;
    }
    throw ParseError("unknown calibration function '" + token + "'");
}

const char* to_string(CalibrationVariant variant) {
    switch (variant) {
    case CalibrationVariant::same:
        return "same";
    case CalibrationVariant::other:
        return "other";
    default:
        return "combined";
    }
}

CalibrationVariant calibration_variant_from_string(const std::string& token) {
    if (token == "same") {
        return CalibrationVariant::same;
    }
    if (token == "other") {
        return CalibrationVariant::other;
    }
    if (token == "combined") {
        return CalibrationVariant::combined;
    }
    throw ParseError("unknown calibration variant '" + token + "'");
}

BinBoundaries calibrate_minmax(std::span<const double> calibration_qs) {
    if (calibration_qs.size() < 2) {
        throw ValidationError("minmax calibration needs at least 2 values");
    }
    const auto [min_it, max_it] = std::minmax_element(calibration_qs.begin(), calibration_qs.end());
    const double lo = *min_it;
    const double hi = *max_it;
    if (!(lo < hi)) {
        throw ValidationError("degenerate calibration: all calibration values are equal");
    }
    BinBoundaries b;
    b.calibration_function = CalibrationFunction::minmax;
    b.boundaries.reserve(kBoundaryCount);
    const double range = hi - lo;
    for (int i = 1; i <= kBoundaryCount; ++i) {
        b.boundaries.push_back(lo + static_cast<double>(i) * range / kBinCount);
    }
    return b;
}

BinBoundaries calibrate_proportional(std::span<const double> calibration_qs) {
    if (calibration_qs.empty()) {
        throw ValidationError("proportional calibration needs at least 1 value");
    }
    std::vector<double> sorted(calibration_qs.begin(), calibration_qs.end());
    std::sort(sorted.begin(), sorted.end());

    BinBoundaries b;
    b.calibration_function = CalibrationFunction::proportional;
    b.boundaries.reserve(kBoundaryCount);
    const std::size_t n = sorted.size();
    for (int i = 1; i <= kBoundaryCount; ++i) {
        // Empirical quantile at i/101, linear interpolation between order
        // statistics.
        const double h = static_cast<double>(i) / kBinCount * static_cast<double>(n - 1);
        const std::size_t lo_idx = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(lo_idx);
        const std::size_t hi_idx = std::min(lo_idx + 1, n - 1);
        b.boundaries.push_back(sorted[lo_idx] + frac * (sorted[hi_idx] - sorted[lo_idx]));
    }
    return b;
}

int apply_normalisation(double q, const BinBoundaries& b) {
    // Count of boundaries strictly below q. A value sitting exactly on tied
    // boundaries lands in the lower bin, so a degenerate calibration maps its
    // own value to 0; the minmax extremes still map to exactly 0 and 100
    // because the boundaries are strictly inside (min, max).
    auto it = std::lower_bound(b.boundaries.begin(), b.boundaries.end(), q);
    return static_cast<int>(it - b.boundaries.begin());
}

std::vector<double> calibration_scores(CalibrationVariant variant, std::span<const double> same_scores,
                                       std::span<const double> other_scores) {
    std::vector<double> out;
    switch (variant) {
    case CalibrationVariant::same:
        out.assign(same_scores.begin(), same_scores.end());
        break;
    case CalibrationVariant::other:
        out.assign(other_scores.begin(), other_scores.end());
        break;
    case CalibrationVariant::combined:
        out.reserve(same_scores.size() + other_scores.size());
        out.assign(same_scores.begin(), same_scores.end());
        out.insert(out.end(), other_scores.begin(), other_scores.end());
        break;
    }
    return out;
}

double curve_divergence(const EdcCurve& raw_curve, const EdcCurve& normalised_curve,
                        const PaucConfig& config) {
    validate(config);
    if (raw_curve.points.empty() || normalised_curve.points.empty()) {
        throw ValidationError("curve divergence needs two non-empty curves");
    }
    const double raw_pauc = pauc(raw_curve, config);
    if (raw_pauc == 0.0) {
        throw ValidationError("curve divergence undefined: raw curve pAUC is 0");
    }

    // |raw - normalised| is itself a step function on the merged breakpoints.
    const auto& a = raw_curve.points;
    const auto& b = normalised_curve.points;
    const double limit = config.discard_limit;
    double area = 0.0;
    std::size_t ia = 0;
    std::size_t ib = 0;
    double x = 0.0;
    double va = a.front().error;
    double vb = b.front().error;
    while (x < limit) {
        while (ia + 1 < a.size() && a[ia + 1].discard_fraction <= x) {
            ++ia;
        }
        while (ib + 1 < b.size() && b[ib + 1].discard_fraction <= x) {
            ++ib;
        }
        va = a[ia].error;
        vb = b[ib].error;
        double next = limit;
        if (ia + 1 < a.size()) {
            next = std::min(next, a[ia + 1].discard_fraction);
        }
        if (ib + 1 < b.size()) {
            next = std::min(next, b[ib + 1].discard_fraction);
        }
        if (next <= x) {
            break; // degenerate spacing; cannot advance
        }
        area += std::abs(va - vb) * (next - x);
        x = next;
    }
    return 100.0 * area / raw_pauc;
}

} // namespace qaeval
