#include "qaeval/score_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>

#include "qaeval/errors.hpp"

namespace qaeval {

namespace {

std::string row_context(const std::string& source_name, std::size_t line_no) {
    return source_name + ":" + std::to_string(line_no);
}

// Splits on ',' without quoting; ids must not contain commas.
std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_finite_double(const std::string& token, const std::string& context) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || token.empty()) {
        throw ParseError(context + ": not a number: '" + token + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(context + ": non-finite score: '" + token + "'");
    }
    return value;
}

// Reads lines tolerating CRLF endings; returns false at EOF.
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

void expect_header(std::istream& in, const std::string& expected, const std::string& source_name,
                   bool& empty_stream) {
    std::string line;
    if (!next_line(in, line)) {
        empty_stream = true;
        return;
    }
    empty_stream = false;
    if (line != expected) {
        throw ParseError(row_context(source_name, 1) + ": expected header '" + expected + "', got '" +
                         line + "'");
    }
}

} // namespace

const char* to_string(ComparisonKind kind) {
    return kind == ComparisonKind::mated ? "mated" : "nonmated";
}

ComparisonKind comparison_kind_from_string(const std::string& token) {
    if (token == "mated") {
        return ComparisonKind::mated;
    }
    if (token == "nonmated") {
        return ComparisonKind::nonmated;
    }
    throw ParseError("unknown kind '" + token + "' (expected mated or nonmated)");
}

std::size_t ComparisonSet::count(ComparisonKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(comparisons.begin(), comparisons.end(),
                      [kind](const Comparison& c) { return c.kind == kind; }));
}

ComparisonSet ComparisonSet::filtered(ComparisonKind kind) const {
    ComparisonSet out;
    for (const Comparison& c : comparisons) {
        if (c.kind == kind) {
            out.comparisons.push_back(c);
        }
    }
    return out;
}

ComparisonKind ComparisonSet::single_kind() const {
    if (comparisons.empty()) {
        throw ValidationError("comparison set is empty");
    }
    ComparisonKind kind = comparisons.front().kind;
    for (const Comparison& c : comparisons) {
        if (c.kind != kind) {
            throw ValidationError("comparison set mixes mated and nonmated comparisons");
        }
    }
    return kind;
}

void QualityScoreTable::insert(const std::string& sample_id, const std::string& algorithm,
                               double quality_score) {
    if (sample_id.empty()) {
        throw ValidationError("empty sample id");
    }
    if (!std::isfinite(quality_score)) {
        throw ValidationError("non-finite quality score for sample '" + sample_id + "', algorithm '" +
                              algorithm + "'");
    }
    auto [it, inserted] = by_algorithm_[algorithm].emplace(sample_id, quality_score);
    if (!inserted) {
        throw ValidationError("duplicate quality score for sample '" + sample_id + "', algorithm '" +
                              algorithm + "'");
    }
}

bool QualityScoreTable::contains(const std::string& sample_id, const std::string& algorithm) const {
    auto it = by_algorithm_.find(algorithm);
    return it != by_algorithm_.end() && it->second.count(sample_id) > 0;
}

double QualityScoreTable::score(const std::string& sample_id, const std::string& algorithm) const {
    auto it = by_algorithm_.find(algorithm);
    if (it != by_algorithm_.end()) {
        auto jt = it->second.find(sample_id);
        if (jt != it->second.end()) {
            return jt->second;
        }
    }
    throw ValidationError("missing quality score for sample '" + sample_id + "', algorithm '" +
                          algorithm + "'");
}

std::vector<std::string> QualityScoreTable::algorithm_names() const {
    std::vector<std::string> names;
    names.reserve(by_algorithm_.size());
    for (const auto& [name, scores] : by_algorithm_) {
        names.push_back(name);
    }
    return names;
}

const std::map<std::string, double>& QualityScoreTable::scores_for(const std::string& algorithm) const {
    static const std::map<std::string, double> empty;
    auto it = by_algorithm_.find(algorithm);
    return it == by_algorithm_.end() ? empty : it->second;
}

std::size_t QualityScoreTable::entry_count() const {
    std::size_t n = 0;
    for (const auto& [name, scores] : by_algorithm_) {
        n += scores.size();
    }
    return n;
}

QualityScoreTable load_quality_scores(std::istream& source, const std::string& source_name) {
    QualityScoreTable table;
    bool empty_stream = false;
    expect_header(source, "sample_id,algorithm,quality_score", source_name, empty_stream);
    if (empty_stream) {
        return table;
    }
    std::string line;
    std::size_t line_no = 1;
    while (next_line(source, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_row(line);
        const std::string context = row_context(source_name, line_no);
        if (fields.size() != 3) {
            throw ParseError(context + ": expected 3 columns, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw ParseError(context + ": empty sample id");
        }
        double score = parse_finite_double(fields[2], context);
        try {
            table.insert(fields[0], fields[1], score);
        } catch (const ValidationError& e) {
            throw ParseError(context + ": " + e.what());
        }
    }
    return table;
}

ComparisonSet load_comparisons(std::istream& source, const std::string& source_name) {
    ComparisonSet set;
    bool empty_stream = false;
    expect_header(source, "sample_id_a,sample_id_b,comparison_score,kind", source_name, empty_stream);
    if (empty_stream) {
        return set;
    }
    std::string line;
    std::size_t line_no = 1;
    while (next_line(source, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_row(line);
        const std::string context = row_context(source_name, line_no);
        if (fields.size() != 4) {
            throw ParseError(context + ": expected 4 columns, got " + std::to_string(fields.size()));
        }
        Comparison c;
        c.sample_a = fields[0];
        c.sample_b = fields[1];
        if (c.sample_a.empty() || c.sample_b.empty()) {
            throw ParseError(context + ": empty sample id");
        }
        if (c.sample_a == c.sample_b) {
            throw ParseError(context + ": self-comparison of sample '" + c.sample_a + "'");
        }
        c.comparison_score = parse_finite_double(fields[2], context);
        try {
            c.kind = comparison_kind_from_string(fields[3]);
        } catch (const ParseError& e) {
            throw ParseError(context + ": " + e.what());
        }
        set.comparisons.push_back(std::move(c));
    }
    return set;
}

namespace {

std::string csv_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

} // namespace

void save_quality_scores(std::ostream& out, const QualityScoreTable& table) {
    out << "sample_id,algorithm,quality_score\n";
    for (const std::string& algorithm : table.algorithm_names()) {
        for (const auto& [sample, score] : table.scores_for(algorithm)) {
            out << sample << ',' << algorithm << ',' << csv_number(score) << '\n';
        }
    }
}

void save_comparisons(std::ostream& out, const ComparisonSet& set) {
    out << "sample_id_a,sample_id_b,comparison_score,kind\n";
    for (const Comparison& c : set.comparisons) {
        out << c.sample_a << ',' << c.sample_b << ',' << csv_number(c.comparison_score) << ','
            << to_string(c.kind) << '\n';
    }
}

double pairwise_qs_min(double qs_a, double qs_b) {
    return std::min(qs_a, qs_b);
}

std::vector<double> pairwise_min_qs(const ComparisonSet& set, const QualityScoreTable& table,
                                    const std::string& algorithm, PairwiseQsFunction f) {
    const auto& scores = table.scores_for(algorithm);
    std::vector<double> out;
    out.reserve(set.size());
    auto lookup = [&](const std::string& sample) {
        auto it = scores.find(sample);
        if (it == scores.end()) {
            throw ValidationError("missing quality score for sample '" + sample + "', algorithm '" +
                                  algorithm + "'");
        }
        return it->second;
    };
    for (const Comparison& c : set.comparisons) {
        out.push_back(f(lookup(c.sample_a), lookup(c.sample_b)));
    }
    return out;
}

bool ValidationReport::consistent() const {
    for (const auto& [algorithm, missing] : missing_scores) {
        if (!missing.empty()) {
            return false;
        }
    }
    return true;
}

ValidationReport validate_dataset(const QualityScoreTable& table, const ComparisonSet& set) {
    ValidationReport report;
    report.mated_count = set.count(ComparisonKind::mated);
    report.nonmated_count = set.count(ComparisonKind::nonmated);

    std::set<std::string> referenced;
    std::set<double> distinct_cs;
    std::set<double> distinct_mated_cs;
    for (const Comparison& c : set.comparisons) {
        referenced.insert(c.sample_a);
        referenced.insert(c.sample_b);
        distinct_cs.insert(c.comparison_score);
        if (c.kind == ComparisonKind::mated) {
            distinct_mated_cs.insert(c.comparison_score);
        }
    }
    report.distinct_cs_count = distinct_cs.size();
    report.distinct_mated_cs_count = distinct_mated_cs.size();

    for (const std::string& algorithm : table.algorithm_names()) {
        std::vector<std::string> missing;
        const auto& scores = table.scores_for(algorithm);
        for (const std::string& sample : referenced) {
            if (scores.count(sample) == 0) {
                missing.push_back(sample);
            }
        }
        report.missing_scores[algorithm] = std::move(missing);
    }
    return report;
}

} // namespace qaeval
