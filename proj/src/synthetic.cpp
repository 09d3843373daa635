#include "qaeval/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "qaeval/errors.hpp"

namespace qaeval {

std::uint64_t CounterRng::mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t h = mix(mix(mix(seed) ^ stream) ^ index);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_symmetric(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                                     double scale) {
    return scale * (2.0 * uniform01(seed, stream, index) - 1.0);
}

void validate(const SyntheticSpec& spec) {
    if (spec.n_subjects < 1) {
        throw ValidationError("synthetic spec needs at least 1 subject");
    }
    if (spec.samples_per_subject < 2) {
        throw ValidationError("synthetic spec needs at least 2 samples per subject (no mated pairs otherwise)");
    }
    if (spec.offset_scales.empty()) {
        throw ValidationError("synthetic spec needs at least one offset scale");
    }
    for (double scale : spec.offset_scales) {
        if (!(scale >= 0.0) || !std::isfinite(scale)) {
            throw ValidationError("offset scales must be finite and non-negative");
        }
    }
}

std::string synthetic_qa_name(std::size_t index) {
    return "SQA" + std::to_string(index + 1);
}

namespace {

std::string sample_id(std::size_t subject, std::size_t sample) {
    return "s" + std::to_string(subject + 1) + "_" + std::to_string(sample + 1);
}

} // namespace

SyntheticDataset generate(const SyntheticSpec& spec) {
    validate(spec);

    SyntheticDataset data;
    const std::size_t k = spec.samples_per_subject;

    // Stream 0 draws utilities; stream 1 + a draws QS offsets for algorithm a.
    for (std::size_t subject = 0; subject < spec.n_subjects; ++subject) {
        std::vector<double> utilities(k);
        std::vector<std::string> ids(k);
        for (std::size_t sample = 0; sample < k; ++sample) {
            const std::uint64_t index = subject * k + sample;
            utilities[sample] = 2.0 * CounterRng::uniform01(spec.seed, 0, index) - 1.0;
            ids[sample] = sample_id(subject, sample);
            data.utilities.emplace(ids[sample], utilities[sample]);
            for (std::size_t a = 0; a < spec.offset_scales.size(); ++a) {
                const double offset =
                    CounterRng::uniform_symmetric(spec.seed, 1 + a, index, spec.offset_scales[a]);
                data.quality_scores.insert(ids[sample], synthetic_qa_name(a),
                                           utilities[sample] + offset);
            }
        }
        // All within-subject pairs; the mated CS is the pairwise minimum of
        // the utilities.
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                Comparison c;
                c.sample_a = ids[i];
                c.sample_b = ids[j];
                c.comparison_score = std::min(utilities[i], utilities[j]);
                c.kind = ComparisonKind::mated;
                data.mated.comparisons.push_back(std::move(c));
            }
        }
    }
    return data;
}

std::map<std::string, double> expected_placements(std::span<const double> offset_scales) {
    if (offset_scales.size() < 2) {
        throw ValidationError("expected placements need at least 2 offset scales");
    }
    const auto [min_it, max_it] = std::minmax_element(offset_scales.begin(), offset_scales.end());
    if (!(*min_it < *max_it)) {
        throw ValidationError("expected placements undefined: all offset scales are equal");
    }
    const double range = *max_it - *min_it;
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < offset_scales.size(); ++i) {
        out.emplace(synthetic_qa_name(i), (offset_scales[i] - *min_it) / range);
    }
    return out;
}

} // namespace qaeval
