#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qaeval {

enum class ComparisonKind { mated, nonmated };

const char* to_string(ComparisonKind kind);
ComparisonKind comparison_kind_from_string(const std::string& token);

// One pair of samples with the similarity score produced by comparing them.
struct Comparison {
    std::string sample_a;
    std::string sample_b;
    double comparison_score = 0.0;
    ComparisonKind kind = ComparisonKind::mated;
};

// Comparisons in file order. Downstream operations sort internally, so the
// stored order never influences results.
struct ComparisonSet {
    std::vector<Comparison> comparisons;

    bool empty() const { return comparisons.empty(); }
    std::size_t size() const { return comparisons.size(); }

    std::size_t count(ComparisonKind kind) const;
    ComparisonSet filtered(ComparisonKind kind) const;
    // Throws ValidationError unless every comparison has the same kind.
    ComparisonKind single_kind() const;
};

// Per (sample, QA algorithm) scalar quality scores, higher = higher utility.
// Long format: coverage may be ragged across algorithms.
class QualityScoreTable {
public:
    // Throws ValidationError on a duplicate (sample, algorithm) key or a
    // non-finite score.
    void insert(const std::string& sample_id, const std::string& algorithm, double quality_score);

    bool contains(const std::string& sample_id, const std::string& algorithm) const;
    // Throws ValidationError naming the sample when the score is missing.
    double score(const std::string& sample_id, const std::string& algorithm) const;

    // Sorted distinct algorithm names.
    std::vector<std::string> algorithm_names() const;
    // Scores of one algorithm keyed by sample id (sorted). Empty map when the
    // algorithm is unknown.
    const std::map<std::string, double>& scores_for(const std::string& algorithm) const;

    std::size_t entry_count() const;
    bool operator==(const QualityScoreTable& other) const = default;

private:
    std::map<std::string, std::map<std::string, double>> by_algorithm_;
};

// CSV ingestion. Schema: header "sample_id,algorithm,quality_score", UTF-8,
// '.' decimal point, no quoting of commas in ids. `source_name` is used in
// error messages only.
QualityScoreTable load_quality_scores(std::istream& source, const std::string& source_name = "<stream>");

// Schema: header "sample_id_a,sample_id_b,comparison_score,kind",
// kind in {mated, nonmated}. Row order is preserved.
ComparisonSet load_comparisons(std::istream& source, const std::string& source_name = "<stream>");

void save_quality_scores(std::ostream& out, const QualityScoreTable& table);
void save_comparisons(std::ostream& out, const ComparisonSet& set);

// Pairwise quality score of one comparison. The default (and only built-in)
// function is the minimum of the two sample QSs; alternatives plug in here
// without touching the curve computation.
using PairwiseQsFunction = double (*)(double qs_a, double qs_b);
double pairwise_qs_min(double qs_a, double qs_b);

// output[i] = f(QS(sample_a_i), QS(sample_b_i)). Throws ValidationError
// naming the first sample without a score for `algorithm`.
std::vector<double> pairwise_min_qs(const ComparisonSet& set, const QualityScoreTable& table,
                                    const std::string& algorithm,
                                    PairwiseQsFunction f = pairwise_qs_min);

struct ValidationReport {
    // Per algorithm: sorted sample ids referenced by the comparison set that
    // have no quality score.
    std::map<std::string, std::vector<std::string>> missing_scores;
    std::size_t mated_count = 0;
    std::size_t nonmated_count = 0;
    // Distinct comparison scores; a small count restricts the achievable
    // starting errors.
    std::size_t distinct_cs_count = 0;
    std::size_t distinct_mated_cs_count = 0;

    bool consistent() const;
};

ValidationReport validate_dataset(const QualityScoreTable& table, const ComparisonSet& set);

} // namespace qaeval
