#include "qaeval/stability.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <thread>

#include "qaeval/edc.hpp"
#include "qaeval/errors.hpp"

namespace qaeval {

std::vector<double> expand_range(const ValueRange& range) {
    if (!(range.step > 0.0)) {
        throw ValidationError("range step must be positive");
    }
    if (range.hi < range.lo) {
        throw ValidationError("range upper bound below lower bound");
    }
    const auto count = static_cast<std::size_t>(std::llround((range.hi - range.lo) / range.step)) + 1;
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        values.push_back(range.lo + static_cast<double>(k) * range.step);
    }
    return values;
}

void validate(const GridConfig& config) {
    if (config.starting_errors.empty() || config.pauc_limits.empty()) {
        throw ValidationError("grid config needs at least one starting error and one pAUC limit");
    }
    for (double e : config.starting_errors) {
        if (!(e > 0.0 && e < 1.0)) {
            throw ValidationError("starting errors must be in (0, 1)");
        }
    }
    for (double l : config.pauc_limits) {
        if (!(l > 0.0 && l < 1.0)) {
            throw ValidationError("pAUC limits must be in (0, 1)");
        }
    }
}

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double_token(const std::string& token, const std::string& context) {
    const std::string t = strip(token);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ParseError(context + ": not a number: '" + token + "'");
    }
    return value;
}

std::vector<double> parse_value_list(const std::string& body, char open, char close,
                                     const std::string& context) {
    const std::string t = strip(body);
    if (t.size() < 2 || t.front() != open || t.back() != close) {
        throw ParseError(context + ": expected '" + std::string(1, open) + "..." +
                         std::string(1, close) + "'");
    }
    std::vector<double> values;
    std::string inner = t.substr(1, t.size() - 2);
    std::size_t start = 0;
    while (start <= inner.size()) {
        std::size_t pos = inner.find(',', start);
        std::string token = pos == std::string::npos ? inner.substr(start) : inner.substr(start, pos - start);
        if (!strip(token).empty()) {
            values.push_back(parse_double_token(token, context));
        }
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    return values;
}

// `{lo, hi, step}` expands a range; `[a, b, c]` is an explicit list.
std::vector<double> parse_values(const std::string& body, const std::string& context) {
    const std::string t = strip(body);
    if (!t.empty() && t.front() == '{') {
        auto parts = parse_value_list(t, '{', '}', context);
        if (parts.size() != 3) {
            throw ParseError(context + ": range needs exactly {lo, hi, step}");
        }
        return expand_range({parts[0], parts[1], parts[2]});
    }
    if (!t.empty() && t.front() == '[') {
        auto values = parse_value_list(t, '[', ']', context);
        if (values.empty()) {
            throw ParseError(context + ": empty value list");
        }
        return values;
    }
    throw ParseError(context + ": expected {lo, hi, step} or [v1, v2, ...]");
}

unsigned thread_count(unsigned requested, std::size_t work_items) {
    unsigned n = requested == 0 ? 1 : requested;
    n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(work_items, 1)));
    return n;
}

} // namespace

GridConfig parse_grid_config(std::istream& source, const std::string& source_name) {
    GridConfig config;
    bool have_errors = false;
    bool have_limits = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::string t = strip(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const std::string context = source_name + ":" + std::to_string(line_no);
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError(context + ": expected 'key = value'");
        }
        const std::string key = strip(t.substr(0, eq));
        const std::string value = t.substr(eq + 1);
        if (key == "starting_errors") {
            config.starting_errors = parse_values(value, context);
            have_errors = true;
        } else if (key == "pauc_limits") {
            config.pauc_limits = parse_values(value, context);
            have_limits = true;
        } else {
            throw ParseError(context + ": unknown key '" + key + "'");
        }
    }
    if (!have_errors || !have_limits) {
        throw ParseError(source_name + ": grid config needs both starting_errors and pauc_limits");
    }
    validate(config);
    return config;
}

std::vector<std::pair<double, double>> build_grid(const GridConfig& config) {
    validate(config);
    std::vector<std::pair<double, double>> cells;
    cells.reserve(config.starting_errors.size() * config.pauc_limits.size());
    for (double e : config.starting_errors) {
        for (double l : config.pauc_limits) {
            cells.emplace_back(e, l);
        }
    }
    return cells;
}

RankingGrid evaluate_grid(const QualityScoreTable& table, const ComparisonSet& mated,
                          const GridConfig& config, Interpolation interpolation, unsigned threads) {
    if (mated.empty()) {
        throw ValidationError("grid evaluation needs a non-empty mated comparison set");
    }
    if (mated.single_kind() != ComparisonKind::mated) {
        throw ValidationError("grid evaluation runs on mated comparisons (FNM-EDC)");
    }

    RankingGrid grid;
    grid.algorithms = table.algorithm_names();
    if (grid.algorithms.empty()) {
        throw ValidationError("grid evaluation needs at least one QA algorithm");
    }

    // Pairwise QSs and their sort order are fixed per algorithm; only the
    // threshold changes across cells.
    std::vector<std::vector<double>> qs_per_algorithm;
    std::vector<std::vector<std::size_t>> order_per_algorithm;
    qs_per_algorithm.reserve(grid.algorithms.size());
    order_per_algorithm.reserve(grid.algorithms.size());
    for (const std::string& algorithm : grid.algorithms) {
        qs_per_algorithm.push_back(pairwise_min_qs(mated, table, algorithm));
        std::vector<std::size_t> order(mated.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto& qs = qs_per_algorithm.back();
        std::sort(order.begin(), order.end(),
                  [&qs](std::size_t a, std::size_t b) { return qs[a] < qs[b]; });
        order_per_algorithm.push_back(std::move(order));
    }

    std::vector<double> mated_scores;
    mated_scores.reserve(mated.size());
    for (const Comparison& c : mated.comparisons) {
        mated_scores.push_back(c.comparison_score);
    }
    std::map<double, ThresholdResult> thresholds;
    for (double target : config.starting_errors) {
        thresholds.emplace(target, threshold_for_starting_error(mated_scores, target));
    }

    const auto cells = build_grid(config);
    grid.cells.resize(cells.size());

    auto evaluate_cell = [&](std::size_t idx) {
        const auto [target, limit] = cells[idx];
        const ThresholdResult thr = thresholds.at(target);
        GridCell cell;
        cell.starting_error_target = target;
        cell.starting_error_achieved = thr.achieved_starting_error;
        cell.pauc_limit = limit;

        PaucConfig pc;
        pc.discard_limit = limit;
        pc.interpolation = interpolation;
        for (std::size_t a = 0; a < grid.algorithms.size(); ++a) {
            EdcCurve curve = compute_edc_presorted(mated, qs_per_algorithm[a], order_per_algorithm[a],
                                                   thr.threshold, ErrorMode::without_discarded);
            cell.raw_paucs[grid.algorithms[a]] = pauc(curve, pc);
        }
        const RankingReport report = rank(cell.raw_paucs, thr.achieved_starting_error, pc);
        for (const RankingEntry& e : report.entries) {
            cell.placements[e.algorithm] = e.relative_rank;
        }
        grid.cells[idx] = std::move(cell);
    };

    const unsigned n_threads = thread_count(threads, cells.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            evaluate_cell(i);
        }
    } else {
        // Cells write disjoint slots, so the result is schedule-independent.
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        std::atomic<std::size_t> next{0};
        for (unsigned t = 0; t < n_threads; ++t) {
            workers.emplace_back([&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= grid.cells.size()) {
                        return;
                    }
                    evaluate_cell(i);
                }
            });
        }
        for (std::thread& w : workers) {
            w.join();
        }
    }
    return grid;
}

std::vector<double> ranking_divergence_mean(const RankingGrid& grid) {
    if (grid.cells.empty()) {
        throw ValidationError("empty ranking grid");
    }
    // Summed in sorted value order so the mean (and hence every divergence)
    // is exactly invariant under any permutation of the cells.
    std::map<std::string, double> mean_placement;
    for (const std::string& a : grid.algorithms) {
        std::vector<double> values;
        values.reserve(grid.cells.size());
        for (const GridCell& cell : grid.cells) {
            values.push_back(cell.placements.at(a));
        }
        std::sort(values.begin(), values.end());
        double sum = 0.0;
        for (double v : values) {
            sum += v;
        }
        mean_placement[a] = sum / static_cast<double>(grid.cells.size());
    }

    std::vector<double> divergence;
    divergence.reserve(grid.cells.size());
    for (const GridCell& cell : grid.cells) {
        double d = 0.0;
        for (const std::string& a : grid.algorithms) {
            d += std::abs(cell.placements.at(a) - mean_placement.at(a));
        }
        divergence.push_back(d);
    }
    return divergence;
}

std::vector<double> ranking_divergence_expected(const RankingGrid& grid,
                                                const std::map<std::string, double>& expected) {
    if (grid.cells.empty()) {
        throw ValidationError("empty ranking grid");
    }
    for (const std::string& a : grid.algorithms) {
        auto it = expected.find(a);
        if (it == expected.end()) {
            throw ValidationError("no expected placement for algorithm '" + a + "'");
        }
        if (!(it->second >= 0.0 && it->second <= 1.0)) {
            throw ValidationError("expected placement for algorithm '" + a + "' outside [0, 1]");
        }
    }
    std::vector<double> divergence;
    divergence.reserve(grid.cells.size());
    for (const GridCell& cell : grid.cells) {
        double d = 0.0;
        for (const std::string& a : grid.algorithms) {
            d += std::abs(cell.placements.at(a) - expected.at(a));
        }
        divergence.push_back(d);
    }
    return divergence;
}

std::map<std::string, PlacementStats> placement_stats(const RankingGrid& grid) {
    if (grid.cells.empty()) {
        throw ValidationError("empty ranking grid");
    }
    const double n = static_cast<double>(grid.algorithms.size());
    std::map<std::string, PlacementStats> stats;
    for (const std::string& a : grid.algorithms) {
        std::vector<double> scaled;
        scaled.reserve(grid.cells.size());
        for (const GridCell& cell : grid.cells) {
            scaled.push_back(1.0 + (n - 1.0) * cell.placements.at(a));
        }
        std::sort(scaled.begin(), scaled.end());

        PlacementStats s;
        s.best = scaled.front();
        s.worst = scaled.back();
        s.span = s.worst - s.best;
        const std::size_t m = scaled.size();
        s.median = m % 2 == 1 ? scaled[m / 2] : 0.5 * (scaled[m / 2 - 1] + scaled[m / 2]);
        s.mean = std::accumulate(scaled.begin(), scaled.end(), 0.0) / static_cast<double>(m);
        double var = 0.0;
        for (double v : scaled) {
            var += (v - s.mean) * (v - s.mean);
        }
        s.std_dev = std::sqrt(var / static_cast<double>(m));
        stats.emplace(a, s);
    }
    return stats;
}

} // namespace qaeval
