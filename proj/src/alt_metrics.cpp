#include "qaeval/alt_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numeric>
#include <set>

#include "qaeval/edc.hpp"
#include "qaeval/errors.hpp"

namespace qaeval {

const char* to_string(ScalarKind kind) {
    switch (kind) {
    case ScalarKind::mean_cs:
        return "mean_cs";
    case ScalarKind::d_prime:
        return "d_prime";
    default:
        return "fnmr_at_fixed_fmr";
    }
}

const char* to_string(CorrelationMethod method) {
    return method == CorrelationMethod::pearson ? "pearson" : "spearman";
}

CorrelationMethod correlation_method_from_string(const std::string& token) {
    if (token == "pearson") {
        return CorrelationMethod::pearson;
    }
    if (token == "spearman") {
        return CorrelationMethod::spearman;
    }
    throw ParseError("unknown correlation method '" + token + "'");
}

namespace {

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

// Two-pass population mean/variance for small score lists.
std::pair<double, double> mean_and_variance(std::span<const double> values) {
    const double m = mean_of(values);
    double var = 0.0;
    for (double v : values) {
        var += (v - m) * (v - m);
    }
    return {m, var / static_cast<double>(values.size())};
}

std::vector<std::size_t> ascending_order(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return order;
}

// Sorts by pairwise QS with the comparison score as tie-break, so the
// summation order behind the curve values is a function of the multiset
// alone and permuting the input rows cannot change any output bit.
std::vector<std::size_t> discard_order(std::span<const double> qs, const ComparisonSet& set) {
    std::vector<std::size_t> order(qs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (qs[a] != qs[b]) {
            return qs[a] < qs[b];
        }
        return set.comparisons[a].comparison_score < set.comparisons[b].comparison_score;
    });
    return order;
}

std::string format_fraction(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError("correlation inputs differ in length");
    }
    if (x.size() < 2) {
        throw ValidationError("correlation needs at least 2 observations");
    }
    const double n = static_cast<double>(x.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;
    double cov = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        throw ValidationError("correlation undefined: zero variance input");
    }
    return cov / std::sqrt(var_x * var_y);
}

// Fractional ranks, ties sharing the mean rank.
std::vector<double> fractional_ranks(std::span<const double> values) {
    const auto order = ascending_order(values);
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double shared = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

void check_single_kind(const ComparisonSet& set, ComparisonKind expected, const char* label) {
    if (set.empty()) {
        throw ValidationError(std::string(label) + " comparison set is empty");
    }
    if (set.single_kind() != expected) {
        throw ValidationError(std::string(label) + " comparison set has the wrong kind");
    }
}

} // namespace

ScalarCurve cs_dc(const ComparisonSet& comparisons, std::span<const double> pairwise_qs) {
    const std::size_t n = comparisons.size();
    if (n == 0) {
        throw ValidationError("cannot compute a CS-DC curve from an empty comparison set");
    }
    comparisons.single_kind();
    if (pairwise_qs.size() != n) {
        throw ValidationError("pairwise QS list not aligned with the comparison set");
    }

    // The set remaining after any discard step is a suffix of the QS-sorted
    // order, so right-to-left suffix sums give every step's mean as a fresh
    // sum over exactly the remaining scores.
    const auto order = discard_order(pairwise_qs, comparisons);
    std::vector<double> suffix_sum(n + 1, 0.0);
    for (std::size_t i = n; i > 0; --i) {
        suffix_sum[i - 1] = suffix_sum[i] + comparisons.comparisons[order[i - 1]].comparison_score;
    }

    ScalarCurve curve;
    curve.value_kind = ScalarKind::mean_cs;
    const double total = static_cast<double>(n);
    curve.points.push_back({0.0, suffix_sum[0] / total});

    std::size_t i = 0;
    while (i < n) {
        const double level = pairwise_qs[order[i]];
        while (i < n && pairwise_qs[order[i]] == level) {
            ++i;
        }
        if (i == n) {
            break;
        }
        curve.points.push_back({static_cast<double>(i) / total,
                                suffix_sum[i] / static_cast<double>(n - i)});
    }
    return curve;
}

namespace {

// Per-kind view of a joint discard walk: remaining comparisons are always a
// suffix of the kind's QS-sorted order. Moments come from suffix sums of
// scores centered at the kind's initial mean (keeps large common offsets out
// of the variance); a suffix whose values are all equal has variance exactly
// zero by definition.
class SuffixMoments {
public:
    SuffixMoments(const ComparisonSet& set, std::span<const double> qs) {
        const auto order = discard_order(qs, set);
        const std::size_t n = order.size();
        scores_.reserve(n);
        qs_sorted_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores_.push_back(set.comparisons[order[i]].comparison_score);
            qs_sorted_.push_back(qs[order[i]]);
        }
        origin_ = mean_of(scores_);
        suffix_sum_.assign(n + 1, 0.0);
        suffix_sq_.assign(n + 1, 0.0);
        all_equal_.assign(n + 1, true);
        for (std::size_t i = n; i > 0; --i) {
            const double c = scores_[i - 1] - origin_;
            suffix_sum_[i - 1] = suffix_sum_[i] + c;
            suffix_sq_[i - 1] = suffix_sq_[i] + c * c;
            all_equal_[i - 1] = i == n || (scores_[i - 1] == scores_[i] && all_equal_[i]);
        }
    }

    // Discards every comparison with pairwise QS <= level.
    void discard_through(double level) {
        while (pos_ < qs_sorted_.size() && qs_sorted_[pos_] <= level) {
            ++pos_;
        }
    }

    std::size_t remaining() const { return qs_sorted_.size() - pos_; }

    double mean() const {
        return origin_ + suffix_sum_[pos_] / static_cast<double>(remaining());
    }

    double variance() const {
        if (all_equal_[pos_]) {
            return 0.0;
        }
        const double k = static_cast<double>(remaining());
        const double m = suffix_sum_[pos_] / k;
        return std::max(0.0, suffix_sq_[pos_] / k - m * m);
    }

private:
    std::vector<double> scores_;   // QS-ascending order
    std::vector<double> qs_sorted_;
    std::vector<double> suffix_sum_;
    std::vector<double> suffix_sq_;
    std::vector<char> all_equal_;
    double origin_ = 0.0;
    std::size_t pos_ = 0;
};

std::vector<double> merged_qs_levels(std::span<const double> a, std::span<const double> b) {
    std::set<double> levels(a.begin(), a.end());
    levels.insert(b.begin(), b.end());
    return {levels.begin(), levels.end()};
}

} // namespace

ScalarCurve dprime_dc(const ComparisonSet& mated, const ComparisonSet& nonmated,
                      std::span<const double> mated_qs, std::span<const double> nonmated_qs) {
    check_single_kind(mated, ComparisonKind::mated, "mated");
    check_single_kind(nonmated, ComparisonKind::nonmated, "nonmated");
    if (mated_qs.size() != mated.size() || nonmated_qs.size() != nonmated.size()) {
        throw ValidationError("pairwise QS lists not aligned with the comparison sets");
    }

    SuffixMoments m(mated, mated_qs);
    SuffixMoments nm(nonmated, nonmated_qs);
    const double total = static_cast<double>(mated.size() + nonmated.size());

    ScalarCurve curve;
    curve.value_kind = ScalarKind::d_prime;
    // Returns false at a singular step (both remaining score multisets
    // constant): an error when it is the starting point, the end of the
    // curve afterwards, since tiny tail remainders routinely degenerate.
    auto emit = [&](double fraction) {
        const double denom = nm.variance() + m.variance();
        if (denom == 0.0) {
            if (curve.points.empty()) {
                throw ValidationError("d' undefined at discard fraction " +
                                      format_fraction(fraction) +
                                      ": both score variances are zero");
            }
            return false;
        }
        // Similarity-score form; equals the dissimilarity-score definition
        // with both means negated.
        curve.points.push_back({fraction, (m.mean() - nm.mean()) / std::sqrt(denom)});
        return true;
    };
    emit(0.0);

    for (double level : merged_qs_levels(mated_qs, nonmated_qs)) {
        m.discard_through(level);
        nm.discard_through(level);
        if (m.remaining() == 0 || nm.remaining() == 0) {
            break; // d' needs both kinds
        }
        if (!emit((total - static_cast<double>(m.remaining() + nm.remaining())) / total)) {
            break;
        }
    }
    return curve;
}

namespace {

// Point-update prefix-sum counts over value ranks.
class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t rank, long long delta) {
        for (std::size_t i = rank + 1; i < tree_.size(); i += i & (~i + 1)) {
            tree_[i] += delta;
        }
    }
    // Count of ranks < rank.
    long long prefix(std::size_t rank) const {
        long long s = 0;
        for (std::size_t i = std::min(rank, tree_.size() - 1); i > 0; i -= i & (~i + 1)) {
            s += tree_[i];
        }
        return s;
    }
    long long total() const { return prefix(tree_.size() - 1); }

private:
    std::vector<long long> tree_;
};

// Multiset of comparison scores keyed by distinct-value rank, supporting the
// remaining-count queries the FC-EDC threshold re-selection needs.
class ScoreCounter {
public:
    explicit ScoreCounter(const ComparisonSet& set) {
        std::set<double> distinct;
        for (const Comparison& c : set.comparisons) {
            distinct.insert(c.comparison_score);
        }
        values_.assign(distinct.begin(), distinct.end());
        counts_ = std::make_unique<Fenwick>(values_.size());
        for (const Comparison& c : set.comparisons) {
            counts_->add(rank_of(c.comparison_score), 1);
        }
    }

    void remove(double score) { counts_->add(rank_of(score), -1); }

    std::size_t remaining() const { return static_cast<std::size_t>(counts_->total()); }

    std::size_t count_below(double threshold) const {
        const std::size_t r = static_cast<std::size_t>(
            std::lower_bound(values_.begin(), values_.end(), threshold) - values_.begin());
        return static_cast<std::size_t>(counts_->prefix(r));
    }

    std::size_t count_at_or_above_rank(std::size_t rank) const {
        return remaining() - static_cast<std::size_t>(counts_->prefix(rank));
    }

    // Smallest remaining cut point whose FMR = at-or-above fraction is
    // <= target; one past the maximum remaining value when even that fails.
    double smallest_threshold_with_fmr_at_most(double target, double* achieved_fmr) const {
        const double n = static_cast<double>(remaining());
        // First rank satisfying the (monotone) condition.
        std::size_t lo = 0;
        std::size_t hi = values_.size();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (static_cast<double>(count_at_or_above_rank(mid)) / n <= target) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        // Skip ranks with no remaining copies; their cut points are not
        // remaining values (the FMR is unchanged across the skip).
        std::size_t rank = lo;
        while (rank < values_.size() && count_at_rank(rank) == 0) {
            ++rank;
        }
        if (rank < values_.size() && count_at_or_above_rank(rank) > 0) {
            if (achieved_fmr) {
                *achieved_fmr = static_cast<double>(count_at_or_above_rank(rank)) / n;
            }
            return values_[rank];
        }
        // Above the maximum remaining value.
        if (achieved_fmr) {
            *achieved_fmr = 0.0;
        }
        return std::nextafter(max_remaining(), std::numeric_limits<double>::infinity());
    }

private:
    std::size_t rank_of(double value) const {
        return static_cast<std::size_t>(
            std::lower_bound(values_.begin(), values_.end(), value) - values_.begin());
    }
    std::size_t count_at_rank(std::size_t rank) const {
        return static_cast<std::size_t>(counts_->prefix(rank + 1) - counts_->prefix(rank));
    }
    double max_remaining() const {
        for (std::size_t r = values_.size(); r > 0; --r) {
            if (count_at_rank(r - 1) > 0) {
                return values_[r - 1];
            }
        }
        throw ValidationError("no remaining comparison scores");
    }

    std::vector<double> values_; // sorted distinct scores
    std::unique_ptr<Fenwick> counts_;
};

} // namespace

ScalarCurve fc_edc(const ComparisonSet& mated, const ComparisonSet& nonmated,
                   std::span<const double> mated_qs, std::span<const double> nonmated_qs,
                   double fixed_fmr_target) {
    check_single_kind(mated, ComparisonKind::mated, "mated");
    check_single_kind(nonmated, ComparisonKind::nonmated, "nonmated");
    if (mated_qs.size() != mated.size() || nonmated_qs.size() != nonmated.size()) {
        throw ValidationError("pairwise QS lists not aligned with the comparison sets");
    }
    if (!(fixed_fmr_target >= 0.0 && fixed_fmr_target <= 1.0)) {
        throw ValidationError("FMR target must be in [0, 1]");
    }

    ScoreCounter mated_counts(mated);
    ScoreCounter nonmated_counts(nonmated);
    const auto mated_order = ascending_order(mated_qs);
    const auto nonmated_order = ascending_order(nonmated_qs);
    const double total = static_cast<double>(mated.size() + nonmated.size());

    ScalarCurve curve;
    curve.value_kind = ScalarKind::fnmr_at_fixed_fmr;
    curve.fmr_target = fixed_fmr_target;

    auto emit = [&](double fraction) {
        double achieved = 0.0;
        const double threshold =
            nonmated_counts.smallest_threshold_with_fmr_at_most(fixed_fmr_target, &achieved);
        const double fnmr = static_cast<double>(mated_counts.count_below(threshold)) /
                            static_cast<double>(mated_counts.remaining());
        curve.points.push_back({fraction, fnmr});
        curve.achieved_fmr.push_back(achieved);
    };
    emit(0.0);

    std::size_t mi = 0;
    std::size_t ni = 0;
    for (double level : merged_qs_levels(mated_qs, nonmated_qs)) {
        while (mi < mated_order.size() && mated_qs[mated_order[mi]] <= level) {
            mated_counts.remove(mated.comparisons[mated_order[mi]].comparison_score);
            ++mi;
        }
        while (ni < nonmated_order.size() && nonmated_qs[nonmated_order[ni]] <= level) {
            nonmated_counts.remove(nonmated.comparisons[nonmated_order[ni]].comparison_score);
            ++ni;
        }
        if (mated_counts.remaining() == 0 || nonmated_counts.remaining() == 0) {
            break; // curve ends at the previous point
        }
        emit(static_cast<double>(mi + ni) / total);
    }
    return curve;
}

double qs_cs_correlation(std::span<const double> x, std::span<const double> y,
                         CorrelationMethod method) {
    if (method == CorrelationMethod::pearson) {
        return pearson(x, y);
    }
    if (x.size() != y.size()) {
        throw ValidationError("correlation inputs differ in length");
    }
    const auto rx = fractional_ranks(x);
    const auto ry = fractional_ranks(y);
    return pearson(rx, ry);
}

double error_proxy_correlation(std::span<const double> pairwise_qs, const ComparisonSet& comparisons,
                               double threshold) {
    if (comparisons.empty()) {
        throw ValidationError("empty comparison set");
    }
    const ComparisonKind kind = comparisons.single_kind();
    if (pairwise_qs.size() != comparisons.size()) {
        throw ValidationError("pairwise QS list not aligned with the comparison set");
    }
    std::vector<double> proxy;
    proxy.reserve(comparisons.size());
    for (const Comparison& c : comparisons.comparisons) {
        proxy.push_back(is_comparison_error(kind, c.comparison_score, threshold) ? 0.0 : 1.0);
    }
    try {
        return pearson(pairwise_qs, proxy);
    } catch (const ValidationError&) {
        throw ValidationError(
            "error-proxy correlation undefined: outcomes are all-error or all-non-error, or the "
            "pairwise QSs are constant");
    }
}

SampleUtilities sample_utility_scores(const ComparisonSet& mated, const ComparisonSet& nonmated) {
    check_single_kind(mated, ComparisonKind::mated, "mated");
    check_single_kind(nonmated, ComparisonKind::nonmated, "nonmated");

    std::map<std::string, std::vector<double>> mated_scores;
    std::map<std::string, std::vector<double>> nonmated_scores;
    for (const Comparison& c : mated.comparisons) {
        mated_scores[c.sample_a].push_back(c.comparison_score);
        mated_scores[c.sample_b].push_back(c.comparison_score);
    }
    for (const Comparison& c : nonmated.comparisons) {
        nonmated_scores[c.sample_a].push_back(c.comparison_score);
        nonmated_scores[c.sample_b].push_back(c.comparison_score);
    }

    std::set<std::string> samples;
    for (const auto& [sample, scores] : mated_scores) {
        samples.insert(sample);
    }
    for (const auto& [sample, scores] : nonmated_scores) {
        samples.insert(sample);
    }

    SampleUtilities result;
    for (const std::string& sample : samples) {
        auto mit = mated_scores.find(sample);
        auto nit = nonmated_scores.find(sample);
        if (mit == mated_scores.end()) {
            result.omitted.emplace_back(sample, "no mated comparisons");
            continue;
        }
        if (nit == nonmated_scores.end()) {
            result.omitted.emplace_back(sample, "no nonmated comparisons");
            continue;
        }
        const auto [mean_m, var_m] = mean_and_variance(mit->second);
        const auto [mean_n, var_n] = mean_and_variance(nit->second);
        const double denom = var_n + var_m;
        if (denom == 0.0) {
            result.omitted.emplace_back(sample, "zero combined score variance");
            continue;
        }
        result.utilities.emplace(sample, (mean_m - mean_n) / std::sqrt(denom));
    }
    return result;
}

DetVsDiscardResult det_vs_discard(const ComparisonSet& mated, const ComparisonSet& nonmated,
                                  std::span<const double> mated_qs, std::span<const double> nonmated_qs,
                                  std::span<const double> qs_thresholds) {
    check_single_kind(mated, ComparisonKind::mated, "mated");
    check_single_kind(nonmated, ComparisonKind::nonmated, "nonmated");
    if (mated_qs.size() != mated.size() || nonmated_qs.size() != nonmated.size()) {
        throw ValidationError("pairwise QS lists not aligned with the comparison sets");
    }
    for (double t : qs_thresholds) {
        if (!std::isfinite(t)) {
            throw ValidationError("QS thresholds must be finite");
        }
    }

    DetVsDiscardResult result;
    for (double qs_threshold : qs_thresholds) {
        std::vector<double> ms;
        std::vector<double> ns;
        for (std::size_t i = 0; i < mated.size(); ++i) {
            if (mated_qs[i] >= qs_threshold) {
                ms.push_back(mated.comparisons[i].comparison_score);
            }
        }
        for (std::size_t i = 0; i < nonmated.size(); ++i) {
            if (nonmated_qs[i] >= qs_threshold) {
                ns.push_back(nonmated.comparisons[i].comparison_score);
            }
        }
        if (ms.empty() || ns.empty()) {
            result.skipped_thresholds.push_back(qs_threshold);
            continue;
        }
        std::sort(ms.begin(), ms.end());
        std::sort(ns.begin(), ns.end());

        std::set<double> decision_thresholds(ms.begin(), ms.end());
        decision_thresholds.insert(ns.begin(), ns.end());

        DetCurve det;
        det.qs_threshold = qs_threshold;
        det.points.reserve(decision_thresholds.size());
        for (double t : decision_thresholds) {
            const auto below_m = std::lower_bound(ms.begin(), ms.end(), t) - ms.begin();
            const auto below_n = std::lower_bound(ns.begin(), ns.end(), t) - ns.begin();
            const double fnmr = static_cast<double>(below_m) / static_cast<double>(ms.size());
            const double fmr =
                static_cast<double>(ns.size() - static_cast<std::size_t>(below_n)) /
                static_cast<double>(ns.size());
            det.points.emplace_back(fmr, fnmr);
        }
        result.curves.push_back(std::move(det));
    }
    return result;
}

} // namespace qaeval
