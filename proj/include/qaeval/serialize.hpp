#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qaeval/alt_metrics.hpp"
#include "qaeval/edc.hpp"
#include "qaeval/normalisation.hpp"
#include "qaeval/pauc.hpp"
#include "qaeval/stability.hpp"

namespace qaeval {

// 17 significant digits: lossless double round-trip.
std::string format_double(double value);

// FNV-1a 64-bit hex digest of a file's bytes. Identity for manifests, not a
// cryptographic hash.
std::string file_digest(const std::string& path);

// Describes one CLI run. Embedded in every structured output; equal
// manifests imply byte-identical outputs. Holds no timestamps.
struct RunManifest {
    std::string command;
    std::string toolkit_version;
    std::vector<std::pair<std::string, std::string>> inputs; // (path, digest)
    std::vector<std::pair<std::string, std::string>> config; // (key, formatted value)
    std::vector<std::string> notes;                          // documented decisions
};

struct NamedCurve {
    std::string algorithm;
    EdcCurve curve;
};

// Curve files: one JSON document, metadata per curve plus a `points` array of
// [discard_fraction, error] pairs, every number printed via format_double.
void write_curve_file(std::ostream& out, const RunManifest& manifest,
                      const std::vector<NamedCurve>& curves);

struct CurveFile {
    std::vector<NamedCurve> curves;
};

CurveFile read_curve_file(std::istream& in, const std::string& source_name = "<stream>");

void write_ranking_file(std::ostream& out, const RunManifest& manifest, const RankingReport& report);

struct NamedCalibration {
    std::string algorithm;
    BinBoundaries bins;
};

void write_calibration_file(std::ostream& out, const RunManifest& manifest,
                            const std::vector<NamedCalibration>& calibrations);

// One record per grid cell plus the per-cell divergence values (aligned with
// grid.cells).
void write_grid_records_file(std::ostream& out, const RunManifest& manifest, const RankingGrid& grid,
                             const std::vector<double>& divergence, const std::string& divergence_kind);

void write_placement_stats_file(std::ostream& out, const RunManifest& manifest,
                                const std::map<std::string, PlacementStats>& stats,
                                std::size_t cell_count, std::size_t algorithm_count);

struct NamedScalarCurve {
    std::string algorithm;
    ScalarCurve curve;
};

void write_scalar_curve_file(std::ostream& out, const RunManifest& manifest,
                             const std::vector<NamedScalarCurve>& curves);

struct NamedDetCurves {
    std::string algorithm;
    std::vector<DetCurve> curves;
    std::vector<double> skipped_thresholds;
};

void write_det_file(std::ostream& out, const RunManifest& manifest,
                    const std::vector<NamedDetCurves>& det);

// Scalar results (correlations and the like): algorithm -> (metric, value).
void write_scalar_report_file(std::ostream& out, const RunManifest& manifest, const std::string& metric,
                              const std::vector<std::pair<std::string, double>>& values,
                              const std::vector<std::string>& warnings = {});

// CSV `algorithm,expected_placement`.
std::map<std::string, double> load_expected_placements(std::istream& source,
                                                       const std::string& source_name = "<stream>");

// CSV `algorithm,pauc` (precomputed pAUC values, e.g. published tables).
std::map<std::string, double> load_pauc_values(std::istream& source,
                                               const std::string& source_name = "<stream>");

// CSV `sample_id,utility` (synthetic oracle output).
void save_utilities(std::ostream& out, const std::map<std::string, double>& utilities);

void write_manifest_file(std::ostream& out, const RunManifest& manifest);

} // namespace qaeval
