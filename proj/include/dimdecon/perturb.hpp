#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dimdecon/bits.hpp"
#include "dimdecon/measures.hpp"

namespace dimdecon {

// Flips exactly `count` distinct positions: the first `count` picks of a
// Fisher-Yates shuffle driven by SplitMix64(seed). With a fixed seed the
// flipped set for count k is a subset of the set for count k + 1.
BitString flip_random(const BitString& x, std::size_t count, std::uint64_t seed);

// Rate convenience: round(rate * |x|), halves away from zero.
std::size_t flip_count_for_rate(std::size_t length, double rate);

// Permutes the floor(|x| / segment_len) whole segments uniformly at random;
// a trailing partial segment stays in place.
BitString scramble_segments(const BitString& x, std::size_t segment_len, std::uint64_t seed);

BitString complement(const BitString& x);
Grid complement(const Grid& g);

// Nearest-neighbour upscale: every cell becomes a factors-shaped block.
Grid amplify(const Grid& g, const Dims& factors);

enum class PerturbationKind { FlipRandom, ScrambleSegments, Complement, Amplify };

PerturbationKind parse_perturbation_kind(std::string_view name);

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::FlipRandom;
    std::optional<double> rate;        // FlipRandom: exactly one of rate/count
    std::optional<std::size_t> count;
    std::size_t segment_len = 0;       // ScrambleSegments
    Dims factors;                      // Amplify
    std::uint64_t seed = 0;

    void validate() const;
};

BitString apply(const BitString& x, const PerturbationSpec& spec);
// Amplify and Complement act on the grid; the stream kinds act on its
// flattening and keep the dims.
Grid apply(const Grid& g, const PerturbationSpec& spec);

struct CurveStep {
    double magnitude = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation over trials
    std::size_t trials = 0;
};

struct PerturbationCurve {
    Measure measure = Measure::BDM;
    double base_score = 0.0;
    std::vector<CurveStep> steps;
};

// For each magnitude m (flip count, or segment length for scrambling) runs
// `trials` perturbations with seeds derive_seed(seed, trial) and records the
// mean and spread of the score. Trial t uses the same seed at every
// magnitude, so flip sets are nested along the schedule.
PerturbationCurve perturbation_curve(const BitString& x, std::span<const std::size_t> schedule,
                                     PerturbationKind kind, const MeasureConfig& measure, std::size_t trials,
                                     std::uint64_t seed, int jobs = 1);

}  // namespace dimdecon
