#include "qaeval/serialize.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "qaeval/errors.hpp"

namespace qaeval {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for digest");
    }
    std::uint64_t hash = 1469598103934665603ULL; // FNV-1a offset basis
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof buf)) {
            break;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\r':
            out += "\\r";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

std::string quoted(const std::string& s) {
    return "\"" + json_escape(s) + "\"";
}

// All structured outputs are JSON written by hand so every double goes
// through format_double and field order stays fixed. Convention: every array
// or object element is followed by comma() or newline() before its container
// closes, so the closing bracket always starts on a fresh line.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out) : out_(out) {}

    void open_object() {
        token("{");
        ++depth_;
        out_ << "\n";
    }
    void close_object() {
        --depth_;
        indent();
        out_ << "}";
    }
    void open_array() {
        token("[");
        ++depth_;
        out_ << "\n";
    }
    void close_array() {
        --depth_;
        indent();
        out_ << "]";
    }

    void key(const std::string& k) {
        indent();
        out_ << quoted(k) << ": ";
        pending_value_ = true;
    }

    void value(const std::string& v) { token(quoted(v)); }
    void value(const char* v) { token(quoted(std::string(v))); }
    void value(double v) { token(format_double(v)); }
    void value(std::size_t v) { token(std::to_string(v)); }
    void value(int v) { token(std::to_string(v)); }

    // Compact [a, b] rows for point arrays.
    void pair_row(double a, double b) {
        token("[" + format_double(a) + ", " + format_double(b) + "]");
    }

    void comma() { out_ << ",\n"; }
    void newline() { out_ << "\n"; }

private:
    void indent() {
        for (int i = 0; i < depth_; ++i) {
            out_ << "  ";
        }
    }
    void token(const std::string& t) {
        if (pending_value_) {
            pending_value_ = false;
        } else {
            indent();
        }
        out_ << t;
    }

    std::ostream& out_;
    int depth_ = 0;
    bool pending_value_ = false;
};

void write_manifest_object(JsonWriter& w, const RunManifest& manifest) {
    w.open_object();
    w.key("command");
    w.value(manifest.command);
    w.comma();
    w.key("toolkit_version");
    w.value(manifest.toolkit_version);
    w.comma();
    w.key("inputs");
    w.open_array();
    for (std::size_t i = 0; i < manifest.inputs.size(); ++i) {
        w.open_object();
        w.key("path");
        w.value(manifest.inputs[i].first);
        w.comma();
        w.key("digest");
        w.value(manifest.inputs[i].second);
        w.newline();
        w.close_object();
        if (i + 1 < manifest.inputs.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.comma();
    w.key("config");
    w.open_array();
    for (std::size_t i = 0; i < manifest.config.size(); ++i) {
        w.open_object();
        w.key("key");
        w.value(manifest.config[i].first);
        w.comma();
        w.key("value");
        w.value(manifest.config[i].second);
        w.newline();
        w.close_object();
        if (i + 1 < manifest.config.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.comma();
    w.key("notes");
    w.open_array();
    for (std::size_t i = 0; i < manifest.notes.size(); ++i) {
        w.value(manifest.notes[i]);
        if (i + 1 < manifest.notes.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
}

void write_document_head(JsonWriter& w, const std::string& format, const RunManifest& manifest) {
    w.open_object();
    w.key("format");
    w.value(format);
    w.comma();
    w.key("manifest");
    write_manifest_object(w, manifest);
    w.comma();
}

} // namespace

void write_manifest_file(std::ostream& out, const RunManifest& manifest) {
    JsonWriter w(out);
    w.open_object();
    w.key("format");
    w.value("qaeval.manifest.v1");
    w.comma();
    w.key("manifest");
    write_manifest_object(w, manifest);
    w.newline();
    w.close_object();
    out << "\n";
}

void write_curve_file(std::ostream& out, const RunManifest& manifest,
                      const std::vector<NamedCurve>& curves) {
    JsonWriter w(out);
    write_document_head(w, "qaeval.curves.v1", manifest);
    w.key("curves");
    w.open_array();
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const NamedCurve& nc = curves[c];
        w.open_object();
        w.key("algorithm");
        w.value(nc.algorithm);
        w.comma();
        w.key("error_mode");
        w.value(to_string(nc.curve.error_mode));
        w.comma();
        w.key("threshold");
        w.value(nc.curve.threshold);
        w.comma();
        w.key("starting_error");
        w.value(nc.curve.starting_error);
        w.comma();
        w.key("total_comparisons");
        w.value(nc.curve.total_comparisons);
        w.comma();
        w.key("points");
        w.open_array();
        for (std::size_t i = 0; i < nc.curve.points.size(); ++i) {
            w.pair_row(nc.curve.points[i].discard_fraction, nc.curve.points[i].error);
            if (i + 1 < nc.curve.points.size()) {
                w.comma();
            } else {
                w.newline();
            }
        }
        w.close_array();
        w.newline();
        w.close_object();
        if (c + 1 < curves.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
    out << "\n";
}

CurveFile read_curve_file(std::istream& in, const std::string& source_name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source_name + ": invalid curve file: " + e.what());
    }
    CurveFile file;
    try {
        if (doc.at("format") != "qaeval.curves.v1") {
            throw ParseError(source_name + ": not a curve file");
        }
        for (const auto& c : doc.at("curves")) {
            NamedCurve nc;
            nc.algorithm = c.at("algorithm").get<std::string>();
            nc.curve.error_mode = error_mode_from_string(c.at("error_mode").get<std::string>());
            nc.curve.threshold = c.at("threshold").get<double>();
            nc.curve.starting_error = c.at("starting_error").get<double>();
            nc.curve.total_comparisons = c.at("total_comparisons").get<std::size_t>();
            for (const auto& p : c.at("points")) {
                nc.curve.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            }
            file.curves.push_back(std::move(nc));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source_name + ": malformed curve file: " + e.what());
    }
    return file;
}

void write_ranking_file(std::ostream& out, const RunManifest& manifest, const RankingReport& report) {
    JsonWriter w(out);
    write_document_head(w, "qaeval.ranking.v1", manifest);
    w.key("config");
    w.open_object();
    w.key("starting_error");
    w.value(report.starting_error);
    w.comma();
    w.key("achieved_starting_error");
    w.value(report.achieved_starting_error);
    w.comma();
    w.key("pauc_limit");
    w.value(report.config.discard_limit);
    w.comma();
    w.key("interpolation");
    w.value(to_string(report.config.interpolation));
    w.newline();
    w.close_object();
    w.comma();
    w.key("ranking");
    w.open_array();
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const RankingEntry& e = report.entries[i];
        w.open_object();
        w.key("algorithm");
        w.value(e.algorithm);
        w.comma();
        w.key("raw_pauc");
        w.value(e.raw_pauc);
        w.comma();
        w.key("adjusted_pauc");
        w.value(e.adjusted_pauc);
        w.comma();
        w.key("relative_rank");
        w.value(e.relative_rank);
        w.comma();
        w.key("discrete_rank");
        w.value(e.discrete_rank);
        w.newline();
        w.close_object();
        if (i + 1 < report.entries.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
    out << "\n";
}

void write_calibration_file(std::ostream& out, const RunManifest& manifest,
                            const std::vector<NamedCalibration>& calibrations) {
    JsonWriter w(out);
    write_document_head(w, "qaeval.calibration.v1", manifest);
    w.key("calibrations");
    w.open_array();
    for (std::size_t c = 0; c < calibrations.size(); ++c) {
        const NamedCalibration& nc = calibrations[c];
        w.open_object();
        w.key("algorithm");
        w.value(nc.algorithm);
        w.comma();
        w.key("calibration_function");
        w.value(to_string(nc.bins.calibration_function));
        w.comma();
        w.key("boundaries");
        w.open_array();
        for (std::size_t i = 0; i < nc.bins.boundaries.size(); ++i) {
            w.value(nc.bins.boundaries[i]);
            if (i + 1 < nc.bins.boundaries.size()) {
                w.comma();
            } else {
                w.newline();
            }
        }
        w.close_array();
        w.newline();
        w.close_object();
        if (c + 1 < calibrations.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
    out << "\n";
}

void write_grid_records_file(std::ostream& out, const RunManifest& manifest, const RankingGrid& grid,
                             const std::vector<double>& divergence,
                             const std::string& divergence_kind) {
    if (divergence.size() != grid.cells.size()) {
        throw ValidationError("divergence values not aligned with grid cells");
    }
    JsonWriter w(out);
    write_document_head(w, "qaeval.grid.v1", manifest);
    w.key("divergence_kind");
    w.value(divergence_kind);
    w.comma();
    w.key("algorithms");
    w.open_array();
    for (std::size_t i = 0; i < grid.algorithms.size(); ++i) {
        w.value(grid.algorithms[i]);
        if (i + 1 < grid.algorithms.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.comma();
    w.key("cells");
    w.open_array();
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        const GridCell& cell = grid.cells[i];
        w.open_object();
        w.key("starting_error_target");
        w.value(cell.starting_error_target);
        w.comma();
        w.key("starting_error_achieved");
        w.value(cell.starting_error_achieved);
        w.comma();
        w.key("pauc_limit");
        w.value(cell.pauc_limit);
        w.comma();
        w.key("placements");
        w.open_object();
        std::size_t k = 0;
        for (const auto& [algorithm, p] : cell.placements) {
            w.key(algorithm);
            w.value(p);
            if (++k < cell.placements.size()) {
                w.comma();
            } else {
                w.newline();
            }
        }
        w.close_object();
        w.comma();
        w.key("raw_paucs");
        w.open_object();
        k = 0;
        for (const auto& [algorithm, p] : cell.raw_paucs) {
            w.key(algorithm);
            w.value(p);
            if (++k < cell.raw_paucs.size()) {
                w.comma();
            } else {
                w.newline();
            }
        }
        w.close_object();
        w.comma();
        w.key("divergence");
        w.value(divergence[i]);
        w.newline();
        w.close_object();
        if (i + 1 < grid.cells.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
    out << "\n";
}

void write_placement_stats_file(std::ostream& out, const RunManifest& manifest,
                                const std::map<std::string, PlacementStats>& stats,
                                std::size_t cell_count, std::size_t algorithm_count) {
    JsonWriter w(out);
    write_document_head(w, "qaeval.placement_stats.v1", manifest);
    w.key("cell_count");
    w.value(cell_count);
    w.comma();
    w.key("algorithm_count");
    w.value(algorithm_count);
    w.comma();
    w.key("stats");
    w.open_array();
    std::size_t i = 0;
    for (const auto& [algorithm, s] : stats) {
        w.open_object();
        w.key("algorithm");
        w.value(algorithm);
        w.comma();
        w.key("span");
        w.value(s.span);
        w.comma();
        w.key("best");
        w.value(s.best);
        w.comma();
        w.key("worst");
        w.value(s.worst);
        w.comma();
        w.key("median");
        w.value(s.median);
        w.comma();
        w.key("mean");
        w.value(s.mean);
        w.comma();
        w.key("std_dev");
        w.value(s.std_dev);
        w.newline();
        w.close_object();
        if (++i < stats.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
    out << "\n";
}

void write_scalar_curve_file(std::ostream& out, const RunManifest& manifest,
                             const std::vector<NamedScalarCurve>& curves) {
    JsonWriter w(out);
    write_document_head(w, "qaeval.scalar_curves.v1", manifest);
    w.key("curves");
    w.open_array();
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const NamedScalarCurve& nc = curves[c];
        w.open_object();
        w.key("algorithm");
        w.value(nc.algorithm);
        w.comma();
        w.key("value_kind");
        w.value(to_string(nc.curve.value_kind));
        w.comma();
        if (nc.curve.value_kind == ScalarKind::fnmr_at_fixed_fmr) {
            w.key("fmr_target");
            w.value(nc.curve.fmr_target);
            w.comma();
            w.key("achieved_fmr");
            w.open_array();
            for (std::size_t i = 0; i < nc.curve.achieved_fmr.size(); ++i) {
                w.value(nc.curve.achieved_fmr[i]);
                if (i + 1 < nc.curve.achieved_fmr.size()) {
                    w.comma();
                } else {
                    w.newline();
                }
            }
            w.close_array();
            w.comma();
        }
        w.key("points");
        w.open_array();
        for (std::size_t i = 0; i < nc.curve.points.size(); ++i) {
            w.pair_row(nc.curve.points[i].discard_fraction, nc.curve.points[i].value);
            if (i + 1 < nc.curve.points.size()) {
                w.comma();
            } else {
                w.newline();
            }
        }
        w.close_array();
        w.newline();
        w.close_object();
        if (c + 1 < curves.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
    out << "\n";
}

void write_det_file(std::ostream& out, const RunManifest& manifest,
                    const std::vector<NamedDetCurves>& det) {
    JsonWriter w(out);
    write_document_head(w, "qaeval.det.v1", manifest);
    w.key("det");
    w.open_array();
    for (std::size_t d = 0; d < det.size(); ++d) {
        const NamedDetCurves& nd = det[d];
        w.open_object();
        w.key("algorithm");
        w.value(nd.algorithm);
        w.comma();
        w.key("skipped_thresholds");
        w.open_array();
        for (std::size_t i = 0; i < nd.skipped_thresholds.size(); ++i) {
            w.value(nd.skipped_thresholds[i]);
            if (i + 1 < nd.skipped_thresholds.size()) {
                w.comma();
            } else {
                w.newline();
            }
        }
        w.close_array();
        w.comma();
        w.key("curves");
        w.open_array();
        for (std::size_t c = 0; c < nd.curves.size(); ++c) {
            const DetCurve& det_curve = nd.curves[c];
            w.open_object();
            w.key("qs_threshold");
            w.value(det_curve.qs_threshold);
            w.comma();
            w.key("points");
            w.open_array();
            for (std::size_t i = 0; i < det_curve.points.size(); ++i) {
                w.pair_row(det_curve.points[i].first, det_curve.points[i].second);
                if (i + 1 < det_curve.points.size()) {
                    w.comma();
                } else {
                    w.newline();
                }
            }
            w.close_array();
            w.newline();
            w.close_object();
            if (c + 1 < nd.curves.size()) {
                w.comma();
            } else {
                w.newline();
            }
        }
        w.close_array();
        w.newline();
        w.close_object();
        if (d + 1 < det.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
    out << "\n";
}

void write_scalar_report_file(std::ostream& out, const RunManifest& manifest, const std::string& metric,
                              const std::vector<std::pair<std::string, double>>& values,
                              const std::vector<std::string>& warnings) {
    JsonWriter w(out);
    write_document_head(w, "qaeval.scalar_report.v1", manifest);
    w.key("metric");
    w.value(metric);
    w.comma();
    w.key("values");
    w.open_array();
    for (std::size_t i = 0; i < values.size(); ++i) {
        w.open_object();
        w.key("algorithm");
        w.value(values[i].first);
        w.comma();
        w.key("value");
        w.value(values[i].second);
        w.newline();
        w.close_object();
        if (i + 1 < values.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.comma();
    w.key("warnings");
    w.open_array();
    for (std::size_t i = 0; i < warnings.size(); ++i) {
        w.value(warnings[i]);
        if (i + 1 < warnings.size()) {
            w.comma();
        } else {
            w.newline();
        }
    }
    w.close_array();
    w.newline();
    w.close_object();
    out << "\n";
}

namespace {

std::map<std::string, double> load_two_column_csv(std::istream& source, const std::string& source_name,
                                                  const std::string& expected_header) {
    std::map<std::string, double> out;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!saw_header) {
            if (line != expected_header) {
                throw ParseError(source_name + ":1: expected header '" + expected_header + "'");
            }
            saw_header = true;
            continue;
        }
        const std::size_t pos = line.find(',');
        if (pos == std::string::npos) {
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": expected 2 columns");
        }
        const std::string name = line.substr(0, pos);
        const std::string value_str = line.substr(pos + 1);
        char* end = nullptr;
        const double value = std::strtod(value_str.c_str(), &end);
        if (end != value_str.c_str() + value_str.size() || value_str.empty()) {
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": not a number: '" +
                             value_str + "'");
        }
        if (!out.emplace(name, value).second) {
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": duplicate entry '" +
                             name + "'");
        }
    }
    return out;
}

} // namespace

std::map<std::string, double> load_expected_placements(std::istream& source,
                                                       const std::string& source_name) {
    return load_two_column_csv(source, source_name, "algorithm,expected_placement");
}

std::map<std::string, double> load_pauc_values(std::istream& source, const std::string& source_name) {
    return load_two_column_csv(source, source_name, "algorithm,pauc");
}

void save_utilities(std::ostream& out, const std::map<std::string, double>& utilities) {
    out << "sample_id,utility\n";
    for (const auto& [sample, utility] : utilities) {
        out << sample << ',' << format_double(utility) << '\n';
    }
}

} // namespace qaeval
