// Acceptance suite: one check per criterion, each printed as a PASS/FAIL
// line with its runtime. Stated runtime bounds are enforced as part of the
// criterion. Invoked by ctest with the qaeval CLI path as the only argument.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qaeval/alt_metrics.hpp"
#include "qaeval/edc.hpp"
#include "qaeval/errors.hpp"
#include "qaeval/normalisation.hpp"
#include "qaeval/pauc.hpp"
#include "qaeval/score_data.hpp"
#include "qaeval/serialize.hpp"
#include "qaeval/stability.hpp"
#include "qaeval/synthetic.hpp"

using namespace qaeval;

namespace {

int g_failed = 0;
std::string g_cli;
std::filesystem::path g_dir;

void report(int number, const std::string& name, bool ok, double ms, double limit_ms) {
    const bool in_time = limit_ms <= 0.0 || ms <= limit_ms;
    const bool pass = ok && in_time;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << name << " ("
              << static_cast<long>(ms) << " ms";
    if (limit_ms > 0.0) {
        std::cout << ", limit " << static_cast<long>(limit_ms) << " ms";
    }
    std::cout << ")";
    if (ok && !in_time) {
        std::cout << " -- checks passed but exceeded the runtime limit";
    }
    std::cout << "\n";
    if (!pass) {
        ++g_failed;
    }
}

void run_criterion(int number, const std::string& name, double limit_ms,
                   const std::function<bool()>& body) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        std::cout << "       criterion " << number << " threw: " << e.what() << "\n";
        ok = false;
    }
    const auto end = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(end - start).count();
    report(number, name, ok, ms, limit_ms);
}

bool expect(bool condition, const std::string& detail) {
    if (!condition) {
        std::cout << "       failed: " << detail << "\n";
    }
    return condition;
}

// --------------------------------------------------------------------------
// 1. Published ranking fixture.

bool criterion_table1() {
    struct Block {
        std::vector<std::pair<std::string, double>> paucs; // published order
        std::vector<double> expected_relative;
    };
    const std::vector<Block> blocks{
        {{{"MagFace", 0.00362},
          {"CR-FIQA(L)", 0.00383},
          {"PCNet", 0.00506},
          {"CR-FIQA(S)", 0.00572},
          {"SER-FIQ", 0.00672}},
         {0.00, 0.07, 0.46, 0.68, 1.00}},
        {{{"CR-FIQA(L)", 0.00588},
          {"SER-FIQ", 0.00589},
          {"MagFace", 0.00666},
          {"CR-FIQA(S)", 0.00787},
          {"PCNet", 0.00793}},
         {0.00, 0.00, 0.38, 0.97, 1.00}},
    };
    PaucConfig config;
    config.discard_limit = 0.2;
    bool ok = true;
    for (const Block& block : blocks) {
        std::map<std::string, double> paucs(block.paucs.begin(), block.paucs.end());
        const RankingReport rep = rank(paucs, 0.05, config);
        for (std::size_t i = 0; i < block.paucs.size(); ++i) {
            ok = expect(rep.entries[i].algorithm == block.paucs[i].first,
                        "rank order mismatch at position " + std::to_string(i)) &&
                 ok;
            ok = expect(rep.entries[i].discrete_rank == static_cast<int>(i) + 1,
                        "discrete rank mismatch for " + rep.entries[i].algorithm) &&
                 ok;
            ok = expect(std::abs(rep.entries[i].relative_rank - block.expected_relative[i]) <=
                            0.005,
                        "relative rank off for " + rep.entries[i].algorithm + ": got " +
                            std::to_string(rep.entries[i].relative_rank)) &&
                 ok;
        }
    }
    return ok;
}

// --------------------------------------------------------------------------
// 2. Theoretical-best subtraction.

bool criterion_theoretical_best() {
    bool ok = true;
    const double v = area_under_theoretical_best(0.05, 0.2);
    // Bit-exact against the published closed form (0.05^2)/2 evaluated in
    // the same arithmetic, and equal to the decimal 0.00125 up to one unit
    // in the last place of the representation.
    ok = expect(v == 0.05 * 0.05 / 2.0, "not bit-exact to (0.05^2)/2") && ok;
    ok = expect(std::abs(v - 0.00125) < 1e-18, "further than 1e-18 from decimal 0.00125") && ok;

    // For limit < E0 the integrand max(0, E0 - x) is linear on [0, limit],
    // so the two-point trapezoid rule integrates it exactly.
    oracles::TestRng rng(2101);
    for (int i = 0; i < 100; ++i) {
        const double e0 = rng.uniform(1e-3, 1.0);
        const double limit = rng.uniform01() * e0 * 0.999 + 1e-9;
        const double integral = 0.5 * ((e0 - 0.0) + (e0 - limit)) * limit;
        ok = expect(std::abs(area_under_theoretical_best(e0, limit) - integral) < 1e-12,
                    "limit<E0 mismatch at E0=" + std::to_string(e0)) &&
             ok;
    }
    return ok;
}

// --------------------------------------------------------------------------
// 3. EDC brute-force oracle equivalence.

bool criterion_edc_oracle() {
    oracles::TestRng rng(2301);
    for (int iter = 0; iter < 1000; ++iter) {
        const auto inst = oracles::random_instance(rng, 10);
        const ComparisonSet set = oracles::make_comparisons(inst.cs, ComparisonKind::mated);
        for (ErrorMode mode : {ErrorMode::without_discarded, ErrorMode::with_discarded}) {
            const EdcCurve curve = compute_edc(set, inst.qs, inst.threshold, mode);
            const auto expected = oracles::brute_force_edc(
                inst.cs, inst.qs, true, inst.threshold, mode == ErrorMode::without_discarded);
            if (curve.points.size() != expected.size()) {
                return expect(false, "point count mismatch at iteration " + std::to_string(iter));
            }
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (curve.points[i].discard_fraction != expected[i].discard_fraction ||
                    curve.points[i].error != expected[i].error) {
                    return expect(false, "point mismatch at iteration " + std::to_string(iter));
                }
            }
        }
    }
    return true;
}

// --------------------------------------------------------------------------
// 4. pAUC against the left-rule Riemann sum.

bool criterion_pauc_riemann() {
    oracles::TestRng rng(2401);
    static const std::size_t totals[] = {8, 10, 16, 20, 25, 40, 50, 100, 125, 200, 250, 500, 1000};
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t total = totals[rng.index(sizeof totals / sizeof totals[0])];
        const std::size_t n_points = 1 + rng.index(std::min<std::size_t>(total, 40));
        std::set<std::size_t> ks{0};
        while (ks.size() < n_points) {
            ks.insert(1 + rng.index(total - 1));
        }
        EdcCurve curve;
        for (std::size_t k : ks) {
            curve.points.push_back(
                {static_cast<double>(k) / static_cast<double>(total), rng.uniform01()});
        }
        PaucConfig config;
        config.discard_limit =
            static_cast<double>(1 + rng.index(99999)) / 100000.0; // grid-aligned limit
        const double exact = pauc(curve, config);
        const double riemann = oracles::riemann_pauc(curve.points, config.discard_limit);
        if (!expect(std::abs(exact - riemann) < 1e-8,
                    "Riemann mismatch " + std::to_string(exact - riemann))) {
            return false;
        }
    }
    return true;
}

// --------------------------------------------------------------------------
// 5. Random baseline stays near the constant starting error.

bool criterion_random_baseline() {
    oracles::TestRng rng(2501);
    std::vector<double> scores;
    for (int i = 0; i < 1000; ++i) {
        scores.push_back(rng.uniform01());
    }
    const ThresholdResult thr = threshold_for_starting_error(scores, 0.05);
    bool ok = expect(thr.achieved_starting_error == 0.05, "achieved starting error is not 0.05");
    const ComparisonSet set = oracles::make_comparisons(scores, ComparisonKind::mated);
    const EdcCurve mean = random_baseline(set, thr.threshold, 100, 42,
                                          ErrorMode::without_discarded);
    for (const EdcPoint& p : mean.points) {
        if (p.discard_fraction <= 0.8 && std::abs(p.error - 0.05) > 0.03) {
            ok = expect(false, "mean error " + std::to_string(p.error) + " at discard " +
                                   std::to_string(p.discard_fraction));
            break;
        }
    }
    ok = expect(std::abs(curve_value_at(mean, 0.8) - 0.05) <= 0.03, "mean error off at 0.8") && ok;
    return ok;
}

// --------------------------------------------------------------------------
// 6. Synthetic ranking stability at desk scale.

bool criterion_synthetic_stability() {
    SyntheticSpec spec;
    spec.n_subjects = 2000;
    spec.samples_per_subject = 5;
    spec.offset_scales = {0.05, 0.10, 0.15, 0.20, 0.25};
    spec.seed = 1;
    const SyntheticDataset data = generate(spec);

    GridConfig config;
    config.starting_errors = expand_range({0.01, 0.10, 0.01});
    config.pauc_limits = {0.01, 0.05, 0.10, 0.15, 0.20};
    const RankingGrid grid = evaluate_grid(data.quality_scores, data.mated, config);
    const auto expected = expected_placements(spec.offset_scales);
    const auto divergence = ranking_divergence_expected(grid, expected);

    bool ok = true;

    // (a) The discrete ranking at limit 0.20 is the expected 1..5 order for
    // every starting error: raw pAUCs strictly increase with the scale.
    for (const GridCell& cell : grid.cells) {
        if (cell.pauc_limit != 0.20) {
            continue;
        }
        for (std::size_t a = 1; a < grid.algorithms.size(); ++a) {
            if (!(cell.raw_paucs.at(synthetic_qa_name(a - 1)) <
                  cell.raw_paucs.at(synthetic_qa_name(a)))) {
                ok = expect(false, "ranking at limit 0.20 not in expected order at starting error " +
                                       std::to_string(cell.starting_error_target));
            }
        }
    }

    // (b) Mean divergence over starting errors: limit 0.20 strictly below
    // limit 0.01.
    double sum_low = 0.0;
    double sum_high = 0.0;
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        if (grid.cells[i].pauc_limit == 0.01) {
            sum_low += divergence[i];
        }
        if (grid.cells[i].pauc_limit == 0.20) {
            sum_high += divergence[i];
        }
    }
    ok = expect(sum_high < sum_low, "divergence at limit 0.20 not below limit 0.01 (" +
                                        std::to_string(sum_high) + " vs " +
                                        std::to_string(sum_low) + ")") &&
         ok;

    // (c) Mean placements are monotone in the offset scale.
    const auto stats = placement_stats(grid);
    for (std::size_t a = 1; a < spec.offset_scales.size(); ++a) {
        if (!(stats.at(synthetic_qa_name(a - 1)).mean < stats.at(synthetic_qa_name(a)).mean)) {
            ok = expect(false, "mean placement not monotone between scales " + std::to_string(a - 1) +
                                   " and " + std::to_string(a));
        }
    }
    return ok;
}

// --------------------------------------------------------------------------
// 7. Normalisation properties.

bool criterion_normalisation() {
    bool ok = true;
    oracles::TestRng rng(2701);

    // 1e5 (calibration, query) draws per calibration function.
    for (int cal_iter = 0; cal_iter < 2000; ++cal_iter) {
        std::vector<double> calibration;
        const std::size_t n = 2 + rng.index(60);
        for (std::size_t i = 0; i < n; ++i) {
            calibration.push_back(rng.uniform(-50.0, 50.0));
        }
        const auto [lo, hi] = std::minmax_element(calibration.begin(), calibration.end());
        std::vector<BinBoundaries> bins;
        bins.push_back(calibrate_proportional(calibration));
        if (*lo < *hi) {
            bins.push_back(calibrate_minmax(calibration));
            ok = ok && apply_normalisation(*lo, bins.back()) == 0 &&
                 apply_normalisation(*hi, bins.back()) == 100;
        }
        for (const BinBoundaries& b : bins) {
            for (int q_iter = 0; q_iter < 25; ++q_iter) {
                double q1 = rng.uniform(-60.0, 60.0);
                double q2 = rng.uniform(-60.0, 60.0);
                if (q1 > q2) {
                    std::swap(q1, q2);
                }
                if (apply_normalisation(q1, b) > apply_normalisation(q2, b)) {
                    return expect(false, "monotonicity violated");
                }
            }
        }
    }
    if (!ok) {
        return expect(false, "minmax extremes did not map to 0 and 100");
    }

    // Same-calibration divergence never exceeds the +0.5-shifted Other
    // calibration on synthetic data, for every synthetic QA at limit 0.2.
    SyntheticSpec spec;
    spec.n_subjects = 1000;
    spec.samples_per_subject = 5;
    spec.offset_scales = {0.05, 0.10, 0.15, 0.20, 0.25};
    spec.seed = 5;
    const SyntheticDataset data = generate(spec);
    std::vector<double> cs;
    for (const Comparison& c : data.mated.comparisons) {
        cs.push_back(c.comparison_score);
    }
    const ThresholdResult thr = threshold_for_starting_error(cs, 0.05);
    PaucConfig config;
    config.discard_limit = 0.2;

    for (std::size_t a = 0; a < spec.offset_scales.size(); ++a) {
        const std::string name = synthetic_qa_name(a);
        std::vector<double> sample_qs;
        for (const auto& [sample, score] : data.quality_scores.scores_for(name)) {
            sample_qs.push_back(score);
        }
        std::vector<double> shifted(sample_qs);
        for (double& v : shifted) {
            v += 0.5;
        }
        const BinBoundaries same = calibrate_minmax(sample_qs);
        const BinBoundaries other = calibrate_minmax(shifted);

        auto curve_with = [&](const BinBoundaries* bins) {
            QualityScoreTable normalised;
            for (const auto& [sample, score] : data.quality_scores.scores_for(name)) {
                normalised.insert(sample, name,
                                  bins == nullptr
                                      ? score
                                      : static_cast<double>(apply_normalisation(score, *bins)));
            }
            const auto qs = pairwise_min_qs(data.mated, normalised, name);
            return compute_edc(data.mated, qs, thr.threshold, ErrorMode::without_discarded);
        };
        const EdcCurve raw = curve_with(nullptr);
        const double d_same = curve_divergence(raw, curve_with(&same), config);
        const double d_other = curve_divergence(raw, curve_with(&other), config);
        if (!expect(d_same <= d_other, name + ": Same divergence " + std::to_string(d_same) +
                                           " above Other " + std::to_string(d_other))) {
            return false;
        }
    }
    return true;
}

// --------------------------------------------------------------------------
// 8. d' and correlation fixtures.

bool criterion_dprime_correlation() {
    bool ok = true;

    // Fixture: mated {0.8, 0.9} vs non-mated {0.1, 0.2}.
    const ComparisonSet mated = oracles::make_comparisons({0.8, 0.9}, ComparisonKind::mated);
    const ComparisonSet nonmated = oracles::make_comparisons({0.1, 0.2}, ComparisonKind::nonmated);
    const std::vector<double> mated_qs{3.0, 4.0};
    const std::vector<double> nonmated_qs{1.0, 2.0};
    const ScalarCurve fixture = dprime_dc(mated, nonmated, mated_qs, nonmated_qs);
    ok = expect(std::abs(fixture.points[0].value - 9.899494936611665) < 1e-9,
                "d' fixture value off: " + std::to_string(fixture.points[0].value)) &&
         ok;

    // Pearson and Spearman against two-pass references on 1,000 vectors.
    oracles::TestRng rng(2801);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t n = 2 + rng.index(40);
        std::vector<double> x;
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
            x.push_back(rng.uniform(-5.0, 5.0));
            y.push_back(rng.uniform(-5.0, 5.0));
        }
        const double pearson_ref = oracles::pearson_reference(x, y);
        if (std::abs(qs_cs_correlation(x, y, CorrelationMethod::pearson) - pearson_ref) >= 1e-12) {
            return expect(false, "pearson mismatch at iteration " + std::to_string(iter));
        }
        // Spearman reference: two-pass Pearson over independently computed
        // fractional ranks (no ties here with continuous draws).
        auto ranks = [](const std::vector<double>& v) {
            std::vector<double> r(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                double rank = 1.0;
                for (std::size_t j = 0; j < v.size(); ++j) {
                    if (v[j] < v[i]) {
                        rank += 1.0;
                    }
                }
                r[i] = rank;
            }
            return r;
        };
        const double spearman_ref = oracles::pearson_reference(ranks(x), ranks(y));
        if (std::abs(qs_cs_correlation(x, y, CorrelationMethod::spearman) - spearman_ref) >=
            1e-12) {
            return expect(false, "spearman mismatch at iteration " + std::to_string(iter));
        }
    }

    // Affine invariance of d' under 100 positive-scale transforms.
    const auto m_inst = oracles::random_instance(rng, 12);
    const auto n_inst = oracles::random_instance(rng, 12);
    const ComparisonSet base_m = oracles::make_comparisons(m_inst.cs, ComparisonKind::mated);
    const ComparisonSet base_n = oracles::make_comparisons(n_inst.cs, ComparisonKind::nonmated);
    const ScalarCurve base = dprime_dc(base_m, base_n, m_inst.qs, n_inst.qs);
    for (int iter = 0; iter < 100; ++iter) {
        const double scale = rng.uniform(0.01, 50.0);
        const double offset = rng.uniform(-50.0, 50.0);
        ComparisonSet tm = base_m;
        ComparisonSet tn = base_n;
        for (Comparison& c : tm.comparisons) {
            c.comparison_score = scale * c.comparison_score + offset;
        }
        for (Comparison& c : tn.comparisons) {
            c.comparison_score = scale * c.comparison_score + offset;
        }
        const ScalarCurve transformed = dprime_dc(tm, tn, m_inst.qs, n_inst.qs);
        if (transformed.points.size() != base.points.size()) {
            return expect(false, "affine transform changed the point count");
        }
        for (std::size_t i = 0; i < base.points.size(); ++i) {
            if (std::abs(transformed.points[i].value - base.points[i].value) >= 1e-9) {
                return expect(false, "affine invariance violated: delta " +
                                         std::to_string(transformed.points[i].value -
                                                        base.points[i].value));
            }
        }
    }
    return ok;
}

// --------------------------------------------------------------------------
// 9. FC-EDC cut-point property.

bool criterion_fc_edc() {
    oracles::TestRng rng(2901);
    for (int iter = 0; iter < 1000; ++iter) {
        const auto m_inst = oracles::random_instance(rng, 8);
        const auto n_inst = oracles::random_instance(rng, 8);
        const ComparisonSet mated = oracles::make_comparisons(m_inst.cs, ComparisonKind::mated);
        const ComparisonSet nonmated = oracles::make_comparisons(n_inst.cs, ComparisonKind::nonmated);
        const double target = rng.uniform01();
        const ScalarCurve curve = fc_edc(mated, nonmated, m_inst.qs, n_inst.qs, target);

        // Exhaustive enumeration of remaining cut points at every step.
        std::vector<double> ms(m_inst.cs);
        std::vector<double> ns(n_inst.cs);
        std::vector<double> mqs(m_inst.qs);
        std::vector<double> nqs(n_inst.qs);
        std::size_t point = 0;
        auto verify_point = [&]() {
            if (!expect(curve.achieved_fmr[point] <= target, "achieved FMR above target")) {
                return false;
            }
            // Candidates: every remaining distinct non-mated score, plus one
            // past the maximum; the minimal one with FMR <= target wins.
            std::vector<double> candidates(ns);
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
            candidates.push_back(
                std::nextafter(candidates.back(), std::numeric_limits<double>::infinity()));
            double threshold = candidates.back();
            double achieved = 0.0;
            for (double t : candidates) {
                std::size_t at_or_above = 0;
                for (double s : ns) {
                    at_or_above += s >= t ? 1 : 0;
                }
                const double fmr = static_cast<double>(at_or_above) / static_cast<double>(ns.size());
                if (fmr <= target) {
                    threshold = t;
                    achieved = fmr;
                    break;
                }
            }
            std::size_t fnm = 0;
            for (double s : ms) {
                fnm += s < threshold ? 1 : 0;
            }
            const double fnmr = static_cast<double>(fnm) / static_cast<double>(ms.size());
            return expect(curve.achieved_fmr[point] == achieved,
                          "achieved FMR does not match the minimal cut point") &&
                   expect(curve.points[point].value == fnmr,
                          "FNMR does not match the minimal cut point threshold");
        };
        if (!verify_point()) {
            return false;
        }
        while (true) {
            // Joint discard of the lowest remaining pairwise QS level.
            double lowest = std::numeric_limits<double>::infinity();
            for (double q : mqs) {
                lowest = std::min(lowest, q);
            }
            for (double q : nqs) {
                lowest = std::min(lowest, q);
            }
            if (!std::isfinite(lowest)) {
                break;
            }
            auto prune = [&](std::vector<double>& cs_list, std::vector<double>& qs_list) {
                std::vector<double> cs2;
                std::vector<double> qs2;
                for (std::size_t i = 0; i < qs_list.size(); ++i) {
                    if (qs_list[i] != lowest) {
                        cs2.push_back(cs_list[i]);
                        qs2.push_back(qs_list[i]);
                    }
                }
                cs_list.swap(cs2);
                qs_list.swap(qs2);
            };
            prune(ms, mqs);
            prune(ns, nqs);
            if (ms.empty() || ns.empty()) {
                break;
            }
            ++point;
            if (!expect(point < curve.points.size(), "curve ended early") || !verify_point()) {
                return false;
            }
        }
        if (!expect(point + 1 == curve.points.size(), "curve has extra points")) {
            return false;
        }
    }
    return true;
}

// --------------------------------------------------------------------------
// 10. CLI determinism.

int run_cli(const std::string& args) {
    const std::string command = g_cli + " --quiet " + args + " 2>/dev/null";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

bool criterion_cli_determinism() {
    std::filesystem::remove_all(g_dir);
    std::filesystem::create_directories(g_dir);
    const std::string d = g_dir.string();

    // Mixed-kind fixture for the altmetrics commands.
    {
        oracles::TestRng rng(3001);
        std::ostringstream scores;
        std::ostringstream comparisons;
        scores << "sample_id,algorithm,quality_score\n";
        comparisons << "sample_id_a,sample_id_b,comparison_score,kind\n";
        std::vector<double> utility(40);
        for (int i = 0; i < 40; ++i) {
            utility[i] = rng.uniform(-1.0, 1.0);
            scores << "m" << i << ",QA_A," << format_double(utility[i] + rng.uniform(-0.1, 0.1))
                   << "\n";
            scores << "m" << i << ",QA_B," << format_double(utility[i] + rng.uniform(-0.4, 0.4))
                   << "\n";
        }
        for (int i = 0; i < 40; ++i) {
            for (int k = 1; k <= 2; ++k) {
                const int j = (i + k) % 40;
                comparisons << "m" << i << ",m" << j << ","
                            << format_double(std::min(utility[i], utility[j]) +
                                             rng.uniform(0.0, 0.05))
                            << ",mated\n";
                const int l = (i + 11 + 5 * k) % 40;
                if (l != i) {
                    comparisons << "m" << i << ",m" << l << ","
                                << format_double(std::min(utility[i], utility[l]) - 0.8 +
                                                 rng.uniform(0.0, 0.05))
                                << ",nonmated\n";
                }
            }
        }
        spit(g_dir / "mix_scores.csv", scores.str());
        spit(g_dir / "mix_comparisons.csv", comparisons.str());
    }
    spit(g_dir / "grid.cfg", "starting_errors = {0.02, 0.10, 0.02}\npauc_limits = [0.05, 0.20]\n");
    spit(g_dir / "paucs.csv", "algorithm,pauc\nA,0.001\nB,0.004\nC,0.002\n");

    // Every subcommand once; altmetrics once per metric. Each entry lists
    // the command and the non-SVG outputs it must reproduce byte-identically.
    struct Step {
        std::string args;
        std::vector<std::string> outputs;
    };
    const std::vector<Step> steps{
        {"synth --subjects 50 --samples-per-subject 4 --scales 0.05,0.15,0.25 --seed 11 "
         "--out-dir " + d + "/synth",
         {"synth/quality_scores.csv", "synth/comparisons.csv", "synth/utilities.csv",
          "synth/expected_placements.csv", "synth/manifest.json"}},
        {"edc --scores " + d + "/synth/quality_scores.csv --comparisons " + d +
             "/synth/comparisons.csv --kind mated --starting-error 0.05 --out " + d +
             "/curves.json --svg " + d + "/curves.svg",
         {"curves.json"}},
        {"rank --curves " + d + "/curves.json --pauc-limit 0.2 --out " + d + "/ranking.json",
         {"ranking.json"}},
        {"rank --paucs " + d + "/paucs.csv --pauc-limit 0.2 --starting-error 0.05 --adjust "
         "best+upper --out " + d + "/ranking_paucs.json",
         {"ranking_paucs.json"}},
        {"normalise --scores " + d + "/synth/quality_scores.csv --function proportional --out " +
             d + "/norm.csv --boundaries-out " + d + "/bounds.json",
         {"norm.csv", "norm.csv.manifest.json", "bounds.json"}},
        {"edc --scores " + d + "/norm.csv --comparisons " + d +
             "/synth/comparisons.csv --kind mated --starting-error 0.05 --out " + d +
             "/norm_curves.json",
         {"norm_curves.json"}},
        {"divergence --raw-curves " + d + "/curves.json --normalised-curves " + d +
             "/norm_curves.json --pauc-limit 0.2 --out " + d + "/divergence.json",
         {"divergence.json"}},
        {"stability --scores " + d + "/synth/quality_scores.csv --comparisons " + d +
             "/synth/comparisons.csv --grid-config " + d + "/grid.cfg --expected " + d +
             "/synth/expected_placements.csv --out " + d + "/grid.json --stats-out " + d +
             "/stats.json",
         {"grid.json", "stats.json"}},
        {"baseline --comparisons " + d + "/synth/comparisons.csv --starting-error 0.05 "
         "--trials 25 --seed 9 --out " + d + "/baseline.json",
         {"baseline.json"}},
        {"altmetrics --metric cs-dc --kind mated --scores " + d + "/mix_scores.csv "
         "--comparisons " + d + "/mix_comparisons.csv --out " + d + "/csdc.json",
         {"csdc.json"}},
        {"altmetrics --metric dprime-dc --scores " + d + "/mix_scores.csv --comparisons " + d +
             "/mix_comparisons.csv --out " + d + "/dprime.json",
         {"dprime.json"}},
        {"altmetrics --metric fc-edc --fmr-target 0.1 --scores " + d + "/mix_scores.csv "
         "--comparisons " + d + "/mix_comparisons.csv --out " + d + "/fcedc.json",
         {"fcedc.json"}},
        {"altmetrics --metric correlation --variant cs --method spearman --scores " + d +
             "/mix_scores.csv --comparisons " + d + "/mix_comparisons.csv --out " + d +
             "/correlation.json",
         {"correlation.json"}},
        {"altmetrics --metric det --qs-thresholds -0.5,0,0.5 --scores " + d +
             "/mix_scores.csv --comparisons " + d + "/mix_comparisons.csv --out " + d +
             "/det.json",
         {"det.json"}},
    };

    for (const Step& step : steps) {
        if (run_cli(step.args) != 0) {
            return expect(false, "command failed: " + step.args);
        }
        std::map<std::string, std::string> first;
        for (const std::string& output : step.outputs) {
            first[output] = slurp(g_dir / output);
            if (first[output].empty()) {
                return expect(false, "empty output " + output);
            }
        }
        if (run_cli(step.args) != 0) {
            return expect(false, "rerun failed: " + step.args);
        }
        for (const std::string& output : step.outputs) {
            if (slurp(g_dir / output) != first[output]) {
                return expect(false, "rerun of '" + step.args + "' changed " + output);
            }
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <path-to-qaeval>\n";
        return 2;
    }
    g_cli = argv[1];
    g_dir = std::filesystem::temp_directory_path() / "qaeval_acceptance";

    run_criterion(1, "published ranking fixture (relative and discrete ranks)", 1000.0,
                  criterion_table1);
    run_criterion(2, "area under theoretical best (exact value and symbolic integral)", 0.0,
                  criterion_theoretical_best);
    run_criterion(3, "EDC equals brute-force discard-and-recount on 1000 instances", 5000.0,
                  criterion_edc_oracle);
    run_criterion(4, "stepwise pAUC equals left-rule Riemann sum at 1e-5", 5000.0,
                  criterion_pauc_riemann);
    run_criterion(5, "random baseline approximates the 0.05 starting error", 10000.0,
                  criterion_random_baseline);
    run_criterion(6, "synthetic ranking stability (order, divergence, monotone placements)",
                  120000.0, criterion_synthetic_stability);
    run_criterion(7, "normalisation monotonicity, exact extremes, Same vs Other divergence",
                  30000.0, criterion_normalisation);
    run_criterion(8, "d' fixture, correlation references, affine invariance", 0.0,
                  criterion_dprime_correlation);
    run_criterion(9, "FC-EDC achieved FMR and threshold minimality on 1000 instances", 10000.0,
                  criterion_fc_edc);
    run_criterion(10, "CLI reruns are byte-identical on non-SVG outputs", 0.0,
                  criterion_cli_determinism);

    if (g_failed == 0) {
        std::cout << "ACCEPTANCE PASSED (10/10)\n";
        return 0;
    }
    std::cout << "ACCEPTANCE FAILED (" << (10 - g_failed) << "/10 passed)\n";
    return 1;
}
