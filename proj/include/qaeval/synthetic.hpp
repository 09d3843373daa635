#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qaeval/score_data.hpp"

namespace qaeval {

// Counter-based deterministic RNG (splitmix64 mixing): every draw is a pure
// function of (seed, stream, index), so generation is reproducible under any
// parallel schedule.
struct CounterRng {
    static std::uint64_t mix(std::uint64_t z);
    // Uniform in [0, 1).
    static double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
    // Uniform in [-scale, scale).
    static double uniform_symmetric(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                                    double scale);
};

struct SyntheticSpec {
    std::size_t n_subjects = 0;
    std::size_t samples_per_subject = 0;
    // One synthetic QA algorithm per scale; strictly positive. Strictly
    // increasing scales give the expected ranking SQA1 (best) .. SQAn (worst).
    std::vector<double> offset_scales;
    std::uint64_t seed = 0;
};

void validate(const SyntheticSpec& spec);

// Names the k-th (0-based) synthetic QA algorithm: "SQA1", "SQA2", ...
std::string synthetic_qa_name(std::size_t index);

struct SyntheticDataset {
    // Hidden per-sample utility scores in [-1, 1); oracle-only, not an input
    // to the EDC evaluation itself.
    std::map<std::string, double> utilities;
    // Within-subject pairs; CS = min of the two utilities.
    ComparisonSet mated;
    // QS = utility + uniform(-scale_k, scale_k), drawn independently per
    // sample per algorithm.
    QualityScoreTable quality_scores;
};

SyntheticDataset generate(const SyntheticSpec& spec);

// e_k = (scale_k - min)/(max - min), keyed by synthetic QA name. Throws
// ValidationError when the scales are all equal.
std::map<std::string, double> expected_placements(std::span<const double> offset_scales);

} // namespace qaeval
