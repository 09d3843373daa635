// Command-line front end: wires score ingestion, EDC/pAUC evaluation,
// normalisation, stability grids, synthetic generation and the alternative
// metrics together through files. Every structured output embeds a run
// manifest; reruns with equal manifests are byte-identical.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qaeval/alt_metrics.hpp"
#include "qaeval/edc.hpp"
#include "qaeval/errors.hpp"
#include "qaeval/normalisation.hpp"
#include "qaeval/pauc.hpp"
#include "qaeval/score_data.hpp"
#include "qaeval/serialize.hpp"
#include "qaeval/stability.hpp"
#include "qaeval/svg_plot.hpp"
#include "qaeval/synthetic.hpp"
#include "qaeval/version.hpp"

namespace {

using namespace qaeval;

bool g_quiet = false;

void info(const std::string& message) {
    if (!g_quiet) {
        std::cerr << message << "\n";
    }
}

unsigned thread_cap() {
    const char* env = std::getenv("EDC_EVAL_THREADS");
    if (env == nullptr) {
        return 1;
    }
    const long v = std::strtol(env, nullptr, 10);
    return v >= 1 ? static_cast<unsigned>(v) : 1;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open input file '" + path + "'");
    }
    return in;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open output file '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw IoError("failed writing to '" + path + "'");
    }
    info("wrote " + path);
}

QualityScoreTable load_scores_file(const std::string& path) {
    auto in = open_input(path);
    return load_quality_scores(in, path);
}

ComparisonSet load_comparisons_file(const std::string& path) {
    auto in = open_input(path);
    return load_comparisons(in, path);
}

std::vector<std::string> split_list(const std::string& list) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t pos = list.find(',', start);
        const std::string token =
            pos == std::string::npos ? list.substr(start) : list.substr(start, pos - start);
        if (!token.empty()) {
            out.push_back(token);
        }
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& list, const std::string& flag) {
    std::vector<double> out;
    for (const std::string& token : split_list(list)) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) {
            throw ValidationError(flag + ": not a number: '" + token + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ValidationError(flag + ": empty list");
    }
    return out;
}

// Selected algorithms, defaulting to every algorithm in the table; unknown
// names are a validation failure.
std::vector<std::string> select_algorithms(const QualityScoreTable& table,
                                           const std::string& requested) {
    const std::vector<std::string> all = table.algorithm_names();
    if (requested.empty()) {
        if (all.empty()) {
            throw ValidationError("the quality score table holds no algorithms");
        }
        return all;
    }
    std::vector<std::string> selected = split_list(requested);
    for (const std::string& name : selected) {
        if (std::find(all.begin(), all.end(), name) == all.end()) {
            throw ValidationError("unknown algorithm '" + name + "' in --algorithms");
        }
    }
    return selected;
}

RunManifest make_manifest(const std::string& command,
                          const std::vector<std::string>& input_paths) {
    RunManifest m;
    m.command = command;
    m.toolkit_version = kToolkitVersion;
    for (const std::string& path : input_paths) {
        m.inputs.emplace_back(path, file_digest(path));
    }
    return m;
}

ThresholdResult resolve_threshold(const ComparisonSet& filtered, ComparisonKind kind,
                                  double starting_error_target) {
    std::vector<double> scores;
    scores.reserve(filtered.size());
    for (const Comparison& c : filtered.comparisons) {
        scores.push_back(c.comparison_score);
    }
    return kind == ComparisonKind::mated
               ? threshold_for_starting_error(scores, starting_error_target)
               : threshold_for_starting_fmr(scores, starting_error_target);
}

// ---------------------------------------------------------------------------
// edc

struct EdcArgs {
    std::string scores_path;
    std::string comparisons_path;
    std::string kind = "mated";
    double starting_error = 0.05;
    std::string error_mode = "without";
    std::string algorithms;
    std::string svg_path;
    std::string out_path;
};

void run_edc(const EdcArgs& args) {
    const QualityScoreTable table = load_scores_file(args.scores_path);
    const ComparisonSet all = load_comparisons_file(args.comparisons_path);
    const ComparisonKind kind = comparison_kind_from_string(args.kind);
    const ErrorMode mode = error_mode_from_string(args.error_mode);
    const ComparisonSet filtered = all.filtered(kind);
    if (filtered.empty()) {
        throw ValidationError("no " + std::string(to_string(kind)) + " comparisons in '" +
                              args.comparisons_path + "'");
    }
    const std::vector<std::string> algorithms = select_algorithms(table, args.algorithms);
    const ThresholdResult thr = resolve_threshold(filtered, kind, args.starting_error);

    std::vector<NamedCurve> curves;
    for (const std::string& algorithm : algorithms) {
        const auto qs = pairwise_min_qs(filtered, table, algorithm);
        curves.push_back({algorithm, compute_edc(filtered, qs, thr.threshold, mode)});
    }

    RunManifest manifest = make_manifest("edc", {args.scores_path, args.comparisons_path});
    manifest.config.emplace_back("kind", to_string(kind));
    manifest.config.emplace_back("error_mode", to_string(mode));
    manifest.config.emplace_back("starting_error_target", format_double(args.starting_error));
    manifest.config.emplace_back("starting_error_achieved",
                                 format_double(thr.achieved_starting_error));
    manifest.config.emplace_back("threshold", format_double(thr.threshold));
    manifest.notes.push_back("decision rule: false non-match iff CS < threshold, false match iff "
                             "CS >= threshold");

    std::ostringstream out;
    write_curve_file(out, manifest, curves);
    write_text_file(args.out_path, out.str());
    info("achieved starting error " + format_double(thr.achieved_starting_error) + " (target " +
         format_double(args.starting_error) + ")");

    if (!args.svg_path.empty()) {
        write_text_file(args.svg_path,
                        render_edc_svg(curves, thr.achieved_starting_error,
                                       std::string("EDC (") + to_string(kind) + ", " +
                                           to_string(mode) + ")"));
    }
}

// ---------------------------------------------------------------------------
// rank

struct RankArgs {
    std::string curves_path;
    std::string paucs_path;
    double pauc_limit = 0.2;
    std::string interpolation = "stepwise";
    std::string adjust = "best";
    double starting_error = -1.0; // overrides curve metadata when >= 0
    std::string out_path;
};

void run_rank(const RankArgs& args) {
    if (args.curves_path.empty() == args.paucs_path.empty()) {
        throw ValidationError("rank needs exactly one of --curves or --paucs");
    }
    PaucConfig config;
    config.discard_limit = args.pauc_limit;
    config.interpolation = interpolation_from_string(args.interpolation);
    validate(config);
    if (args.adjust != "none" && args.adjust != "best" && args.adjust != "best+upper") {
        throw ValidationError("--adjust must be none, best or best+upper");
    }

    std::map<std::string, double> paucs;
    double starting_error = std::max(args.starting_error, 0.0);
    std::vector<std::string> inputs;

    if (!args.curves_path.empty()) {
        inputs.push_back(args.curves_path);
        auto in = open_input(args.curves_path);
        const CurveFile file = read_curve_file(in, args.curves_path);
        if (file.curves.empty()) {
            throw ValidationError("no curves in '" + args.curves_path + "'");
        }
        for (const NamedCurve& nc : file.curves) {
            if (!paucs.emplace(nc.algorithm, pauc(nc.curve, config)).second) {
                throw ValidationError("duplicate curve for algorithm '" + nc.algorithm + "'");
            }
            if (nc.curve.starting_error != file.curves.front().curve.starting_error) {
                throw ValidationError("curves in '" + args.curves_path +
                                      "' disagree on the starting error; rank them separately");
            }
        }
        if (args.starting_error < 0.0) {
            starting_error = file.curves.front().curve.starting_error;
        }
    } else {
        inputs.push_back(args.paucs_path);
        auto in = open_input(args.paucs_path);
        paucs = load_pauc_values(in, args.paucs_path);
        if (paucs.empty()) {
            throw ValidationError("no pAUC values in '" + args.paucs_path + "'");
        }
    }

    RankingReport report = rank(paucs, starting_error, config);
    if (args.adjust == "none") {
        for (RankingEntry& e : report.entries) {
            e.adjusted_pauc = e.raw_pauc;
        }
    } else if (args.adjust == "best+upper") {
        const double upper = upper_bound_pauc(starting_error, config.discard_limit);
        if (upper == 0.0) {
            throw ValidationError("--adjust best+upper needs a non-zero starting error");
        }
        const double best_area = area_under_theoretical_best(starting_error, config.discard_limit);
        for (RankingEntry& e : report.entries) {
            e.adjusted_pauc = (e.raw_pauc - best_area) / upper;
        }
    }

    RunManifest manifest = make_manifest("rank", inputs);
    manifest.config.emplace_back("pauc_limit", format_double(args.pauc_limit));
    manifest.config.emplace_back("interpolation", args.interpolation);
    manifest.config.emplace_back("adjust", args.adjust);
    if (config.interpolation != Interpolation::stepwise) {
        manifest.notes.push_back("non-default interpolation: linear");
    }
    manifest.notes.push_back("ranking computed from raw pAUC values; the adjustment only changes "
                             "the reported adjusted_pauc column");

    std::ostringstream out;
    write_ranking_file(out, manifest, report);
    write_text_file(args.out_path, out.str());
}

// ---------------------------------------------------------------------------
// normalise

struct NormaliseArgs {
    std::string scores_path;
    std::string function = "minmax";
    std::string calibration_data = "same";
    std::string calibration_scores_path;
    std::string out_path;
    std::string boundaries_path;
};

void run_normalise(const NormaliseArgs& args) {
    const QualityScoreTable table = load_scores_file(args.scores_path);
    const CalibrationFunction function = calibration_function_from_string(args.function);
    const CalibrationVariant variant = calibration_variant_from_string(args.calibration_data);

    QualityScoreTable other;
    std::vector<std::string> inputs{args.scores_path};
    if (variant != CalibrationVariant::same) {
        if (args.calibration_scores_path.empty()) {
            throw ValidationError("--calibration-data " + args.calibration_data +
                                  " needs --calibration-scores");
        }
        other = load_scores_file(args.calibration_scores_path);
        inputs.push_back(args.calibration_scores_path);
    }

    QualityScoreTable normalised;
    std::vector<NamedCalibration> calibrations;
    for (const std::string& algorithm : table.algorithm_names()) {
        std::vector<double> same_scores;
        for (const auto& [sample, score] : table.scores_for(algorithm)) {
            same_scores.push_back(score);
        }
        std::vector<double> other_scores;
        if (variant != CalibrationVariant::same) {
            const auto& scores = other.scores_for(algorithm);
            if (scores.empty()) {
                throw ValidationError("calibration scores are missing algorithm '" + algorithm +
                                      "'");
            }
            for (const auto& [sample, score] : scores) {
                other_scores.push_back(score);
            }
        }
        const std::vector<double> calibration_qs =
            calibration_scores(variant, same_scores, other_scores);
        const BinBoundaries bins = function == CalibrationFunction::minmax
                                       ? calibrate_minmax(calibration_qs)
                                       : calibrate_proportional(calibration_qs);
        for (const auto& [sample, score] : table.scores_for(algorithm)) {
            normalised.insert(sample, algorithm,
                              static_cast<double>(apply_normalisation(score, bins)));
        }
        calibrations.push_back({algorithm, bins});
    }

    RunManifest manifest = make_manifest("normalise", inputs);
    manifest.config.emplace_back("calibration_function", args.function);
    manifest.config.emplace_back("calibration_data", args.calibration_data);
    manifest.notes.push_back("minmax bins: boundary_i = min + i*(max-min)/101 for i = 1..100");
    manifest.notes.push_back("proportional bins: boundary_i = linear-interpolation quantile at "
                             "i/101");
    manifest.notes.push_back("bin membership: count of boundaries strictly below the score; "
                             "values on tied boundaries fall in the lower bin");

    std::ostringstream csv;
    save_quality_scores(csv, normalised);
    write_text_file(args.out_path, csv.str());
    std::ostringstream manifest_out;
    write_manifest_file(manifest_out, manifest);
    write_text_file(args.out_path + ".manifest.json", manifest_out.str());

    if (!args.boundaries_path.empty()) {
        std::ostringstream bout;
        write_calibration_file(bout, manifest, calibrations);
        write_text_file(args.boundaries_path, bout.str());
    }
}

// ---------------------------------------------------------------------------
// divergence

struct DivergenceArgs {
    std::string raw_curves_path;
    std::string normalised_curves_path;
    double pauc_limit = 0.2;
    std::string out_path;
};

void run_divergence(const DivergenceArgs& args) {
    auto raw_in = open_input(args.raw_curves_path);
    const CurveFile raw = read_curve_file(raw_in, args.raw_curves_path);
    auto norm_in = open_input(args.normalised_curves_path);
    const CurveFile norm = read_curve_file(norm_in, args.normalised_curves_path);

    PaucConfig config;
    config.discard_limit = args.pauc_limit;
    validate(config);

    std::map<std::string, const EdcCurve*> norm_by_name;
    for (const NamedCurve& nc : norm.curves) {
        norm_by_name[nc.algorithm] = &nc.curve;
    }
    std::vector<std::pair<std::string, double>> values;
    for (const NamedCurve& nc : raw.curves) {
        auto it = norm_by_name.find(nc.algorithm);
        if (it == norm_by_name.end()) {
            throw ValidationError("no normalised curve for algorithm '" + nc.algorithm + "'");
        }
        values.emplace_back(nc.algorithm, curve_divergence(nc.curve, *it->second, config));
    }

    RunManifest manifest =
        make_manifest("divergence", {args.raw_curves_path, args.normalised_curves_path});
    manifest.config.emplace_back("pauc_limit", format_double(args.pauc_limit));

    std::ostringstream out;
    write_scalar_report_file(out, manifest, "curve_divergence_percent", values);
    write_text_file(args.out_path, out.str());
}

// ---------------------------------------------------------------------------
// stability

struct StabilityArgs {
    std::string scores_path;
    std::string comparisons_path;
    std::string grid_config_path;
    std::string expected_path;
    std::string out_path;
    std::string stats_out_path;
};

void run_stability(const StabilityArgs& args) {
    const QualityScoreTable table = load_scores_file(args.scores_path);
    const ComparisonSet all = load_comparisons_file(args.comparisons_path);
    const ComparisonSet mated = all.filtered(ComparisonKind::mated);
    auto grid_in = open_input(args.grid_config_path);
    const GridConfig config = parse_grid_config(grid_in, args.grid_config_path);

    std::vector<std::string> inputs{args.scores_path, args.comparisons_path,
                                    args.grid_config_path};
    std::optional<std::map<std::string, double>> expected;
    if (!args.expected_path.empty()) {
        auto in = open_input(args.expected_path);
        expected = load_expected_placements(in, args.expected_path);
        inputs.push_back(args.expected_path);
    }

    const RankingGrid grid = evaluate_grid(table, mated, config, Interpolation::stepwise,
                                           thread_cap());
    const std::vector<double> divergence = expected.has_value()
                                               ? ranking_divergence_expected(grid, *expected)
                                               : ranking_divergence_mean(grid);

    RunManifest manifest = make_manifest("stability", inputs);
    manifest.config.emplace_back("cells", std::to_string(grid.cells.size()));
    manifest.config.emplace_back("divergence_kind", expected.has_value() ? "expected" : "mean");
    manifest.notes.push_back("divergence is the unscaled sum over algorithms of |placement - "
                             "reference|");
    manifest.notes.push_back("placement statistics use the scaled placement 1 + (n-1)*p in "
                             "[1, n]");

    std::ostringstream records;
    write_grid_records_file(records, manifest, grid, divergence,
                            expected.has_value() ? "expected" : "mean");
    write_text_file(args.out_path, records.str());

    std::ostringstream stats;
    write_placement_stats_file(stats, manifest, placement_stats(grid), grid.cells.size(),
                               grid.algorithms.size());
    write_text_file(args.stats_out_path, stats.str());
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
    std::size_t subjects = 0;
    std::size_t samples_per_subject = 0;
    std::string scales;
    std::string out_dir;
};

void run_synth(const SynthArgs& args, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_subjects = args.subjects;
    spec.samples_per_subject = args.samples_per_subject;
    spec.offset_scales = parse_double_list(args.scales, "--scales");
    spec.seed = seed;
    validate(spec);

    const SyntheticDataset data = generate(spec);
    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + args.out_dir + "': " + ec.message());
    }
    const std::string scores_path = args.out_dir + "/quality_scores.csv";
    const std::string comparisons_path = args.out_dir + "/comparisons.csv";
    const std::string utilities_path = args.out_dir + "/utilities.csv";

    std::ostringstream scores;
    save_quality_scores(scores, data.quality_scores);
    write_text_file(scores_path, scores.str());

    std::ostringstream comparisons;
    save_comparisons(comparisons, data.mated);
    write_text_file(comparisons_path, comparisons.str());

    std::ostringstream utilities;
    save_utilities(utilities, data.utilities);
    write_text_file(utilities_path, utilities.str());

    bool distinct_scales = false;
    for (double s : spec.offset_scales) {
        distinct_scales = distinct_scales || s != spec.offset_scales.front();
    }
    if (distinct_scales) {
        std::ostringstream expected;
        expected << "algorithm,expected_placement\n";
        for (const auto& [name, e] : expected_placements(spec.offset_scales)) {
            expected << name << ',' << format_double(e) << '\n';
        }
        write_text_file(args.out_dir + "/expected_placements.csv", expected.str());
    }

    RunManifest manifest = make_manifest("synth", {});
    manifest.config.emplace_back("subjects", std::to_string(spec.n_subjects));
    manifest.config.emplace_back("samples_per_subject", std::to_string(spec.samples_per_subject));
    manifest.config.emplace_back("scales", args.scales);
    manifest.config.emplace_back("seed", std::to_string(seed));
    manifest.inputs.emplace_back(scores_path, file_digest(scores_path));
    manifest.inputs.emplace_back(comparisons_path, file_digest(comparisons_path));
    manifest.inputs.emplace_back(utilities_path, file_digest(utilities_path));
    manifest.notes.push_back("utilities.csv is oracle-only output, not an EDC evaluation input");
    manifest.notes.push_back("QS offsets are drawn independently per algorithm, uniform on "
                             "(-scale, +scale)");

    std::ostringstream manifest_out;
    write_manifest_file(manifest_out, manifest);
    write_text_file(args.out_dir + "/manifest.json", manifest_out.str());
}

// ---------------------------------------------------------------------------
// baseline

struct BaselineArgs {
    std::string comparisons_path;
    std::string kind = "mated";
    double starting_error = 0.05;
    std::size_t trials = 100;
    std::string error_mode = "without";
    std::string out_path;
};

void run_baseline(const BaselineArgs& args, std::uint64_t seed) {
    const ComparisonSet all = load_comparisons_file(args.comparisons_path);
    const ComparisonKind kind = comparison_kind_from_string(args.kind);
    const ErrorMode mode = error_mode_from_string(args.error_mode);
    const ComparisonSet filtered = all.filtered(kind);
    if (filtered.empty()) {
        throw ValidationError("no " + std::string(to_string(kind)) + " comparisons in '" +
                              args.comparisons_path + "'");
    }
    const ThresholdResult thr = resolve_threshold(filtered, kind, args.starting_error);
    const EdcCurve mean = random_baseline(filtered, thr.threshold, args.trials, seed, mode);

    RunManifest manifest = make_manifest("baseline", {args.comparisons_path});
    manifest.config.emplace_back("kind", to_string(kind));
    manifest.config.emplace_back("error_mode", to_string(mode));
    manifest.config.emplace_back("starting_error_target", format_double(args.starting_error));
    manifest.config.emplace_back("starting_error_achieved",
                                 format_double(thr.achieved_starting_error));
    manifest.config.emplace_back("trials", std::to_string(args.trials));
    manifest.config.emplace_back("seed", std::to_string(seed));
    manifest.notes.push_back("mean of per-trial EDC curves under uniform random pairwise QSs, "
                             "sampled stepwise on the union of trial discard fractions");

    std::ostringstream out;
    write_curve_file(out, manifest, {{"random_baseline", mean}});
    write_text_file(args.out_path, out.str());
}

// ---------------------------------------------------------------------------
// altmetrics

struct AltMetricsArgs {
    std::string metric;
    std::string scores_path;
    std::string comparisons_path;
    std::string algorithms;
    std::string kind = "mated";
    double fmr_target = 0.01;
    std::string variant = "cs";
    std::string method = "pearson";
    double starting_error = 0.05;
    std::string qs_thresholds;
    std::string out_path;
};

void run_altmetrics(const AltMetricsArgs& args) {
    const QualityScoreTable table = load_scores_file(args.scores_path);
    const ComparisonSet all = load_comparisons_file(args.comparisons_path);
    const std::vector<std::string> algorithms = select_algorithms(table, args.algorithms);
    const ComparisonSet mated = all.filtered(ComparisonKind::mated);
    const ComparisonSet nonmated = all.filtered(ComparisonKind::nonmated);

    RunManifest manifest = make_manifest("altmetrics", {args.scores_path, args.comparisons_path});
    manifest.config.emplace_back("metric", args.metric);

    std::ostringstream out;
    if (args.metric == "cs-dc") {
        const ComparisonKind kind = comparison_kind_from_string(args.kind);
        const ComparisonSet& set = kind == ComparisonKind::mated ? mated : nonmated;
        if (set.empty()) {
            throw ValidationError("no " + std::string(to_string(kind)) + " comparisons");
        }
        manifest.config.emplace_back("kind", to_string(kind));
        std::vector<NamedScalarCurve> curves;
        for (const std::string& algorithm : algorithms) {
            curves.push_back({algorithm, cs_dc(set, pairwise_min_qs(set, table, algorithm))});
        }
        write_scalar_curve_file(out, manifest, curves);
    } else if (args.metric == "dprime-dc") {
        std::vector<NamedScalarCurve> curves;
        for (const std::string& algorithm : algorithms) {
            curves.push_back({algorithm, dprime_dc(mated, nonmated,
                                                   pairwise_min_qs(mated, table, algorithm),
                                                   pairwise_min_qs(nonmated, table, algorithm))});
        }
        write_scalar_curve_file(out, manifest, curves);
    } else if (args.metric == "fc-edc") {
        manifest.config.emplace_back("fmr_target", format_double(args.fmr_target));
        std::vector<NamedScalarCurve> curves;
        for (const std::string& algorithm : algorithms) {
            curves.push_back({algorithm, fc_edc(mated, nonmated,
                                                pairwise_min_qs(mated, table, algorithm),
                                                pairwise_min_qs(nonmated, table, algorithm),
                                                args.fmr_target)});
        }
        write_scalar_curve_file(out, manifest, curves);
    } else if (args.metric == "correlation") {
        const CorrelationMethod method = correlation_method_from_string(args.method);
        manifest.config.emplace_back("variant", args.variant);
        manifest.config.emplace_back("method", args.method);
        std::vector<std::pair<std::string, double>> values;
        std::vector<std::string> warnings;
        if (args.variant == "cs") {
            // QS-vs-CS correlation over every comparison of both kinds.
            if (all.empty()) {
                throw ValidationError("no comparisons");
            }
            std::vector<double> cs;
            for (const Comparison& c : all.comparisons) {
                cs.push_back(c.comparison_score);
            }
            for (const std::string& algorithm : algorithms) {
                values.emplace_back(algorithm,
                                    qs_cs_correlation(pairwise_min_qs(all, table, algorithm), cs,
                                                      method));
            }
        } else if (args.variant == "proxy") {
            const ComparisonKind kind = comparison_kind_from_string(args.kind);
            const ComparisonSet& set = kind == ComparisonKind::mated ? mated : nonmated;
            if (set.empty()) {
                throw ValidationError("no " + std::string(to_string(kind)) + " comparisons");
            }
            const ThresholdResult thr = resolve_threshold(set, kind, args.starting_error);
            manifest.config.emplace_back("kind", to_string(kind));
            manifest.config.emplace_back("threshold", format_double(thr.threshold));
            for (const std::string& algorithm : algorithms) {
                values.emplace_back(algorithm,
                                    error_proxy_correlation(pairwise_min_qs(set, table, algorithm),
                                                            set, thr.threshold));
            }
        } else if (args.variant == "utility") {
            // d'-style utility stand-in correlated against the sample QSs.
            const SampleUtilities utilities = sample_utility_scores(mated, nonmated);
            manifest.notes.push_back("sample utilities are a d'-style stand-in, not a "
                                     "reproduction of any published utility definition");
            for (const auto& [sample, reason] : utilities.omitted) {
                warnings.push_back("sample '" + sample + "' omitted: " + reason);
            }
            for (const std::string& algorithm : algorithms) {
                std::vector<double> x;
                std::vector<double> y;
                const auto& scores = table.scores_for(algorithm);
                for (const auto& [sample, utility] : utilities.utilities) {
                    auto it = scores.find(sample);
                    if (it != scores.end()) {
                        x.push_back(utility);
                        y.push_back(it->second);
                    }
                }
                values.emplace_back(algorithm, qs_cs_correlation(x, y, method));
            }
        } else {
            throw ValidationError("--variant must be cs, proxy or utility");
        }
        const std::string metric_name = "correlation_" + args.variant + "_" + args.method;
        write_scalar_report_file(out, manifest, metric_name, values, warnings);
    } else if (args.metric == "det") {
        const std::vector<double> thresholds =
            parse_double_list(args.qs_thresholds, "--qs-thresholds");
        manifest.config.emplace_back("qs_thresholds", args.qs_thresholds);
        std::vector<NamedDetCurves> det;
        for (const std::string& algorithm : algorithms) {
            const DetVsDiscardResult result =
                det_vs_discard(mated, nonmated, pairwise_min_qs(mated, table, algorithm),
                               pairwise_min_qs(nonmated, table, algorithm), thresholds);
            for (double skipped : result.skipped_thresholds) {
                info("algorithm " + algorithm + ": QS threshold " + format_double(skipped) +
                     " skipped (left a comparison kind empty)");
            }
            det.push_back({algorithm, result.curves, result.skipped_thresholds});
        }
        write_det_file(out, manifest, det);
    } else {
        throw ValidationError("--metric must be cs-dc, dprime-dc, fc-edc, correlation or det");
    }
    write_text_file(args.out_path, out.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qaeval: biometric quality-assessment evaluation toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "seed for randomised operations");
    app.add_flag("--quiet", g_quiet, "suppress informational messages");

    EdcArgs edc_args;
    CLI::App* edc_cmd = app.add_subcommand("edc", "compute EDC step curves per QA algorithm");
    edc_cmd->add_option("--scores", edc_args.scores_path, "quality score CSV")->required();
    edc_cmd->add_option("--comparisons", edc_args.comparisons_path, "comparison CSV")->required();
    edc_cmd->add_option("--kind", edc_args.kind, "mated|nonmated (default mated)");
    edc_cmd->add_option("--starting-error", edc_args.starting_error, "target starting error")
        ->required();
    edc_cmd->add_option("--error-mode", edc_args.error_mode, "without|with (default without)");
    edc_cmd->add_option("--algorithms", edc_args.algorithms, "comma-separated subset");
    edc_cmd->add_option("--svg", edc_args.svg_path, "also render an SVG plot");
    edc_cmd->add_option("--out", edc_args.out_path, "curve file output")->required();

    RankArgs rank_args;
    CLI::App* rank_cmd = app.add_subcommand("rank", "rank QA algorithms by pAUC");
    rank_cmd->add_option("--curves", rank_args.curves_path, "curve file from `edc`");
    rank_cmd->add_option("--paucs", rank_args.paucs_path, "CSV algorithm,pauc");
    rank_cmd->add_option("--pauc-limit", rank_args.pauc_limit, "discard fraction limit")
        ->required();
    rank_cmd->add_option("--interpolation", rank_args.interpolation, "stepwise|linear");
    rank_cmd->add_option("--adjust", rank_args.adjust, "none|best|best+upper (default best)");
    rank_cmd->add_option("--starting-error", rank_args.starting_error,
                         "starting error for adjustments (default: curve metadata)");
    rank_cmd->add_option("--out", rank_args.out_path, "ranking report output")->required();

    NormaliseArgs norm_args;
    CLI::App* norm_cmd =
        app.add_subcommand("normalise", "normalise quality scores to [0, 100] integers");
    norm_cmd->add_option("--scores", norm_args.scores_path, "quality score CSV")->required();
    norm_cmd->add_option("--function", norm_args.function, "minmax|proportional");
    norm_cmd->add_option("--calibration-data", norm_args.calibration_data,
                         "same|other|combined (default same)");
    norm_cmd->add_option("--calibration-scores", norm_args.calibration_scores_path,
                         "quality score CSV for other/combined calibration");
    norm_cmd->add_option("--out", norm_args.out_path, "normalised score CSV output")->required();
    norm_cmd->add_option("--boundaries-out", norm_args.boundaries_path,
                         "calibration boundary export");

    DivergenceArgs div_args;
    CLI::App* div_cmd =
        app.add_subcommand("divergence", "area between raw and normalised curves / raw pAUC");
    div_cmd->add_option("--raw-curves", div_args.raw_curves_path, "curve file")->required();
    div_cmd->add_option("--normalised-curves", div_args.normalised_curves_path, "curve file")
        ->required();
    div_cmd->add_option("--pauc-limit", div_args.pauc_limit, "discard fraction limit")->required();
    div_cmd->add_option("--out", div_args.out_path, "divergence report output")->required();

    StabilityArgs stab_args;
    CLI::App* stab_cmd =
        app.add_subcommand("stability", "ranking divergence over a starting-error x limit grid");
    stab_cmd->add_option("--scores", stab_args.scores_path, "quality score CSV")->required();
    stab_cmd->add_option("--comparisons", stab_args.comparisons_path, "comparison CSV")->required();
    stab_cmd->add_option("--grid-config", stab_args.grid_config_path, "grid config file")
        ->required();
    stab_cmd->add_option("--expected", stab_args.expected_path,
                         "CSV algorithm,expected_placement (divergence vs expected)");
    stab_cmd->add_option("--out", stab_args.out_path, "grid record output")->required();
    stab_cmd->add_option("--stats-out", stab_args.stats_out_path, "placement statistics output")
        ->required();

    SynthArgs synth_args;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a fully synthetic score dataset");
    synth_cmd->add_option("--subjects", synth_args.subjects, "number of synthetic subjects")
        ->required();
    synth_cmd->add_option("--samples-per-subject", synth_args.samples_per_subject,
                          "samples per subject")
        ->required();
    synth_cmd->add_option("--scales", synth_args.scales, "comma-separated QS offset scales")
        ->required();
    synth_cmd->add_option("--out-dir", synth_args.out_dir, "output directory")->required();

    BaselineArgs base_args;
    CLI::App* base_cmd =
        app.add_subcommand("baseline", "mean EDC curve under random quality scores");
    base_cmd->add_option("--comparisons", base_args.comparisons_path, "comparison CSV")->required();
    base_cmd->add_option("--kind", base_args.kind, "mated|nonmated (default mated)");
    base_cmd->add_option("--starting-error", base_args.starting_error, "target starting error")
        ->required();
    base_cmd->add_option("--trials", base_args.trials, "number of random-QS trials");
    base_cmd->add_option("--error-mode", base_args.error_mode, "without|with (default without)");
    base_cmd->add_option("--out", base_args.out_path, "curve file output")->required();

    AltMetricsArgs alt_args;
    CLI::App* alt_cmd = app.add_subcommand("altmetrics", "CS-DC, d'-DC, FC-EDC, correlations, DET");
    alt_cmd->add_option("--metric", alt_args.metric, "cs-dc|dprime-dc|fc-edc|correlation|det")
        ->required();
    alt_cmd->add_option("--scores", alt_args.scores_path, "quality score CSV")->required();
    alt_cmd->add_option("--comparisons", alt_args.comparisons_path, "comparison CSV")->required();
    alt_cmd->add_option("--algorithms", alt_args.algorithms, "comma-separated subset");
    alt_cmd->add_option("--kind", alt_args.kind, "mated|nonmated where applicable");
    alt_cmd->add_option("--fmr-target", alt_args.fmr_target, "FC-EDC fixed FMR target");
    alt_cmd->add_option("--variant", alt_args.variant, "correlation variant: cs|proxy|utility");
    alt_cmd->add_option("--method", alt_args.method, "pearson|spearman");
    alt_cmd->add_option("--starting-error", alt_args.starting_error,
                        "starting error for the proxy threshold");
    alt_cmd->add_option("--qs-thresholds", alt_args.qs_thresholds,
                        "comma-separated QS thresholds for det");
    alt_cmd->add_option("--out", alt_args.out_path, "output file")->required();

    // Let --seed / --quiet appear after the subcommand as well.
    for (CLI::App* sub : {edc_cmd, rank_cmd, norm_cmd, div_cmd, stab_cmd, synth_cmd, base_cmd,
                          alt_cmd}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (edc_cmd->parsed()) {
            run_edc(edc_args);
        } else if (rank_cmd->parsed()) {
            run_rank(rank_args);
        } else if (norm_cmd->parsed()) {
            run_normalise(norm_args);
        } else if (div_cmd->parsed()) {
            run_divergence(div_args);
        } else if (stab_cmd->parsed()) {
            run_stability(stab_args);
        } else if (synth_cmd->parsed()) {
            run_synth(synth_args, seed);
        } else if (base_cmd->parsed()) {
            run_baseline(base_args, seed);
        } else if (alt_cmd->parsed()) {
            run_altmetrics(alt_args);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
