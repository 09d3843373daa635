#include "qaeval/pauc.hpp"

#include <algorithm>
#include <cmath>

#include "qaeval/errors.hpp"

namespace qaeval {

const char* to_string(Interpolation interpolation) {
    return interpolation == Interpolation::stepwise ? "stepwise" : "linear";
}

Interpolation interpolation_from_string(const std::string& token) {
    if (token == "stepwise") {
        return Interpolation::stepwise;
    }
    if (token == "linear") {
        return Interpolation::linear;
    }
    throw ParseError("unknown interpolation '" + token + "'");
}

void validate(const PaucConfig& config) {
    if (config.discard_lower != 0.0) {
        throw ValidationError("pAUC range minimum is fixed to 0");
    }
    if (!(config.discard_limit > 0.0 && config.discard_limit <= 1.0)) {
        throw ValidationError("pAUC discard limit must be in (0, 1]");
    }
}

double pauc(std::span<const EdcPoint> points, const PaucConfig& config) {
    validate(config);
    if (points.empty()) {
        throw ValidationError("cannot integrate an empty curve");
    }
    const double limit = config.discard_limit;
    double area = 0.0;

    if (config.interpolation == Interpolation::stepwise) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double left = points[i].discard_fraction;
            if (left >= limit) {
                break;
            }
            const double right = i + 1 < points.size()
                                     ? std::min(points[i + 1].discard_fraction, limit)
                                     : limit;
            area += points[i].error * (right - left);
        }
        return area;
    }

    // Linear: trapezoids between points, constant after the last point.
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double x0 = points[i].discard_fraction;
        const double x1 = points[i + 1].discard_fraction;
        const double v0 = points[i].error;
        const double v1 = points[i + 1].error;
        if (x0 >= limit) {
            return area;
        }
        if (x1 <= limit) {
            area += 0.5 * (v0 + v1) * (x1 - x0);
        } else {
            const double t = (limit - x0) / (x1 - x0);
            const double v_limit = v0 + t * (v1 - v0);
            area += 0.5 * (v0 + v_limit) * (limit - x0);
            return area;
        }
    }
    const double x_last = points.back().discard_fraction;
    if (x_last < limit) {
        area += points.back().error * (limit - x_last);
    }
    return area;
}

double pauc(const EdcCurve& curve, const PaucConfig& config) {
    return pauc(std::span<const EdcPoint>(curve.points), config);
}

double area_under_theoretical_best(double starting_error, double limit) {
    if (!(starting_error >= 0.0 && starting_error <= 1.0)) {
        throw ValidationError("starting error must be in [0, 1]");
    }
    if (!(limit > 0.0)) {
        throw ValidationError("limit must be positive");
    }
    if (limit >= starting_error) {
        return starting_error * starting_error / 2.0;
    }
    return starting_error * limit - limit * limit / 2.0;
}

double upper_bound_pauc(double starting_error, double limit) {
    if (!(starting_error >= 0.0 && starting_error <= 1.0)) {
        throw ValidationError("starting error must be in [0, 1]");
    }
    if (!(limit > 0.0)) {
        throw ValidationError("limit must be positive");
    }
    return starting_error * limit;
}

RankingReport rank(const std::map<std::string, double>& paucs, double starting_error,
                   const PaucConfig& config) {
    validate(config);
    if (paucs.empty()) {
        throw ValidationError("nothing to rank");
    }

    RankingReport report;
    report.starting_error = starting_error;
    report.achieved_starting_error = starting_error;
    report.config = config;

    const double best_area = area_under_theoretical_best(starting_error, config.discard_limit);

    std::vector<RankingEntry> entries;
    entries.reserve(paucs.size());
    double min_pauc = paucs.begin()->second;
    double max_pauc = paucs.begin()->second;
    for (const auto& [algorithm, value] : paucs) {
        entries.push_back({algorithm, value, value - best_area, 0.0, 1});
        min_pauc = std::min(min_pauc, value);
        max_pauc = std::max(max_pauc, value);
    }

    const double range = max_pauc - min_pauc;
    for (RankingEntry& e : entries) {
        e.relative_rank = range > 0.0 ? (e.raw_pauc - min_pauc) / range : 0.0;
    }

    // Competition ranking on ascending pAUC: ties share the smaller rank and
    // the next rank skips.
    std::sort(entries.begin(), entries.end(), [](const RankingEntry& a, const RankingEntry& b) {
        return a.raw_pauc != b.raw_pauc ? a.raw_pauc < b.raw_pauc : a.algorithm < b.algorithm;
    });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && entries[i].raw_pauc == entries[i - 1].raw_pauc) {
            entries[i].discrete_rank = entries[i - 1].discrete_rank;
        } else {
            entries[i].discrete_rank = static_cast<int>(i) + 1;
        }
    }

    report.entries = std::move(entries);
    return report;
}

} // namespace qaeval
