#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qaeval/errors.hpp"
#include "qaeval/serialize.hpp"
#include "qaeval/version.hpp"

using namespace qaeval;

TEST_CASE("format_double is a lossless double round-trip") {
    oracles::TestRng rng(11001);
    for (int iter = 0; iter < 2000; ++iter) {
        const double v = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
    CHECK(format_double(0.25) == "0.25");
}

namespace {

RunManifest test_manifest() {
    RunManifest m;
    m.command = "edc";
    m.toolkit_version = kToolkitVersion;
    m.inputs.emplace_back("scores.csv", "0123456789abcdef");
    m.config.emplace_back("starting_error", "0.05");
    m.notes.push_back("decision rule: false non-match iff CS < threshold");
    return m;
}

EdcCurve sample_curve() {
    EdcCurve c;
    c.points = {{0.0, 0.5}, {0.25, 1.0 / 3.0}, {0.75, 0.0}};
    c.starting_error = 0.5;
    c.threshold = 0.3;
    c.error_mode = ErrorMode::without_discarded;
    c.total_comparisons = 4;
    return c;
}

} // namespace

TEST_CASE("curve files round-trip bit-exactly") {
    std::vector<NamedCurve> curves;
    curves.push_back({"algo with \"quotes\"", sample_curve()});
    EdcCurve second = sample_curve();
    second.points[1].error = 0.1234567890123456789;
    curves.push_back({"B", second});

    std::ostringstream out;
    write_curve_file(out, test_manifest(), curves);

    std::istringstream in(out.str());
    const CurveFile reloaded = read_curve_file(in);
    REQUIRE(reloaded.curves.size() == 2);
    for (std::size_t c = 0; c < curves.size(); ++c) {
        CHECK(reloaded.curves[c].algorithm == curves[c].algorithm);
        CHECK(reloaded.curves[c].curve.threshold == curves[c].curve.threshold);
        CHECK(reloaded.curves[c].curve.starting_error == curves[c].curve.starting_error);
        CHECK(reloaded.curves[c].curve.error_mode == curves[c].curve.error_mode);
        CHECK(reloaded.curves[c].curve.total_comparisons == curves[c].curve.total_comparisons);
        REQUIRE(reloaded.curves[c].curve.points.size() == curves[c].curve.points.size());
        for (std::size_t i = 0; i < curves[c].curve.points.size(); ++i) {
            CHECK(reloaded.curves[c].curve.points[i].discard_fraction ==
                  curves[c].curve.points[i].discard_fraction);
            CHECK(reloaded.curves[c].curve.points[i].error == curves[c].curve.points[i].error);
        }
    }
}

TEST_CASE("reading a non-curve document fails cleanly") {
    std::istringstream not_json("not json at all");
    CHECK_THROWS_AS(read_curve_file(not_json), ParseError);
    std::istringstream wrong_format("{\"format\": \"something.else\", \"curves\": []}");
    CHECK_THROWS_AS(read_curve_file(wrong_format), ParseError);
}

TEST_CASE("writers emit identical bytes on identical inputs") {
    std::vector<NamedCurve> curves{{"A", sample_curve()}};
    std::ostringstream a;
    std::ostringstream b;
    write_curve_file(a, test_manifest(), curves);
    write_curve_file(b, test_manifest(), curves);
    CHECK(a.str() == b.str());
}

TEST_CASE("file digests identify content") {
    const std::string path_a = "/tmp/qaeval_digest_a.txt";
    const std::string path_b = "/tmp/qaeval_digest_b.txt";
    {
        std::ofstream fa(path_a);
        fa << "contents one";
        std::ofstream fb(path_b);
        fb << "contents two";
    }
    const std::string da = file_digest(path_a);
    CHECK(da.size() == 16);
    CHECK(da == file_digest(path_a));
    CHECK(da != file_digest(path_b));
    CHECK_THROWS_AS(file_digest("/tmp/qaeval_does_not_exist_417"), IoError);
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
}

TEST_CASE("two-column CSV loaders") {
    SUBCASE("expected placements") {
        std::istringstream in("algorithm,expected_placement\nSQA1,0\nSQA2,0.25\n");
        const auto m = load_expected_placements(in);
        CHECK(m.at("SQA1") == 0.0);
        CHECK(m.at("SQA2") == 0.25);
    }
    SUBCASE("pauc values") {
        std::istringstream in("algorithm,pauc\nMagFace,0.00362\n");
        CHECK(load_pauc_values(in).at("MagFace") == 0.00362);
    }
    SUBCASE("wrong header") {
        std::istringstream in("a,b\nx,1\n");
        CHECK_THROWS_AS(load_expected_placements(in), ParseError);
    }
    SUBCASE("duplicate algorithm") {
        std::istringstream in("algorithm,pauc\nA,1\nA,2\n");
        CHECK_THROWS_AS(load_pauc_values(in), ParseError);
    }
    SUBCASE("bad number names the line") {
        std::istringstream in("algorithm,pauc\nA,xyz\n");
        CHECK_THROWS_WITH_AS(load_pauc_values(in, "p.csv"), doctest::Contains("p.csv:2"), ParseError);
    }
}

TEST_CASE("scalar curve and det writers produce parseable JSON") {
    ScalarCurve sc;
    sc.value_kind = ScalarKind::fnmr_at_fixed_fmr;
    sc.fmr_target = 0.25;
    sc.points = {{0.0, 0.5}, {0.5, 0.25}};
    sc.achieved_fmr = {0.25, 0.2};
    std::ostringstream out;
    write_scalar_curve_file(out, test_manifest(), {{"A", sc}});
    // Parse back with the JSON library to confirm structural validity.
    auto doc = nlohmann::json::parse(out.str());
    CHECK(doc.at("format") == "qaeval.scalar_curves.v1");
    CHECK(doc.at("curves").at(0).at("value_kind") == "fnmr_at_fixed_fmr");
    CHECK(doc.at("curves").at(0).at("achieved_fmr").size() == 2);

    DetCurve det;
    det.qs_threshold = 0.5;
    det.points = {{1.0, 0.0}, {0.5, 0.5}};
    std::ostringstream det_out;
    write_det_file(det_out, test_manifest(), {{"A", {det}, {9.0}}});
    auto det_doc = nlohmann::json::parse(det_out.str());
    CHECK(det_doc.at("det").at(0).at("curves").at(0).at("points").size() == 2);
    CHECK(det_doc.at("det").at(0).at("skipped_thresholds").at(0) == 9.0);
}

TEST_CASE("grid and stats writers produce parseable JSON") {
    RankingGrid grid;
    grid.algorithms = {"A", "B"};
    GridCell cell;
    cell.starting_error_target = 0.05;
    cell.starting_error_achieved = 0.05;
    cell.pauc_limit = 0.2;
    cell.placements = {{"A", 0.0}, {"B", 1.0}};
    cell.raw_paucs = {{"A", 0.001}, {"B", 0.002}};
    grid.cells.push_back(cell);

    std::ostringstream out;
    write_grid_records_file(out, test_manifest(), grid, {0.0}, "expected");
    auto doc = nlohmann::json::parse(out.str());
    CHECK(doc.at("cells").size() == 1);
    CHECK(doc.at("cells").at(0).at("placements").at("B") == 1.0);

    std::ostringstream stats_out;
    write_placement_stats_file(stats_out, test_manifest(), placement_stats(grid), grid.cells.size(),
                               grid.algorithms.size());
    auto stats_doc = nlohmann::json::parse(stats_out.str());
    CHECK(stats_doc.at("stats").size() == 2);

    std::ostringstream ranking_out;
    RankingReport report = rank({{"A", 0.001}, {"B", 0.002}}, 0.05, PaucConfig{});
    write_ranking_file(ranking_out, test_manifest(), report);
    auto ranking_doc = nlohmann::json::parse(ranking_out.str());
    CHECK(ranking_doc.at("ranking").at(0).at("algorithm") == "A");
    CHECK(ranking_doc.at("ranking").at(0).at("discrete_rank") == 1);
}

TEST_CASE("scalar report and manifest writers emit valid JSON, empty arrays included") {
    RunManifest m;
    m.command = "altmetrics";
    m.toolkit_version = kToolkitVersion;

    std::ostringstream report;
    write_scalar_report_file(report, m, "correlation_cs_pearson", {{"A", 0.5}});
    const auto doc = nlohmann::json::parse(report.str());
    CHECK(doc.at("metric") == "correlation_cs_pearson");
    CHECK(doc.at("warnings").empty());
    CHECK(doc.at("manifest").at("inputs").empty());

    std::ostringstream manifest_only;
    write_manifest_file(manifest_only, m);
    const auto mdoc = nlohmann::json::parse(manifest_only.str());
    CHECK(mdoc.at("format") == "qaeval.manifest.v1");
    CHECK(mdoc.at("manifest").at("command") == "altmetrics");
}
