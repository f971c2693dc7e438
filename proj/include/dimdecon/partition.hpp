#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dimdecon/bits.hpp"
#include "dimdecon/measures.hpp"

namespace dimdecon {

enum class PartitionMode { Divisors, Full };

PartitionMode parse_partition_mode(std::string_view name);

// A way of laying out the first `covered_bits` bits of a stream as a grid.
struct PartitionCandidate {
    Dims dims;
    std::size_t covered_bits = 0;
    std::size_t remainder_bits = 0;

    std::size_t leading() const { return dims.front(); }
    friend bool operator==(const PartitionCandidate&, const PartitionCandidate&) = default;
};

PartitionCandidate make_candidate(std::size_t n, Dims dims);

// Divisors: (w, n/w) for each divisor w. Full: (w, n/w rounded down) for
// every w in [1, n].
std::vector<PartitionCandidate> enumerate_2d(std::size_t n, PartitionMode mode);

struct Enumerate3dOptions {
    // Full mode sweeps the leading dimension over [lead_min, lead_max]
    // (lead_max = 0: as far as the last dimension stays >= 1) for each fixed
    // second dimension in `trailing` (empty: default_trailing_dim(n)).
    std::size_t lead_min = 1;
    std::size_t lead_max = 0;
    std::vector<std::size_t> trailing;
    std::size_t cap = 1'000'000;
};

struct Enumeration {
    std::vector<PartitionCandidate> candidates;
    bool truncated = false;
};

Enumeration enumerate_3d(std::size_t n, PartitionMode mode, const Enumerate3dOptions& options = {});

// Largest divisor of n not exceeding its cube root.
std::size_t default_trailing_dim(std::size_t n);

Grid reshape(const BitString& x, const PartitionCandidate& c);

struct SweepOptions {
    std::size_t ndim = 2;
    PartitionMode mode = PartitionMode::Full;
    MeasureConfig measure;
    // Leading-dimension window; lead_max = 0 means unbounded.
    std::size_t lead_min = 1;
    std::size_t lead_max = 0;
    std::vector<std::size_t> trailing;  // 3D only
    // Full mode skips candidates that discard more than this fraction.
    double max_remainder_fraction = 0.25;
    std::size_t cap = 1'000'000;
    int jobs = 1;
};

struct SweepPoint {
    PartitionCandidate candidate;
    ComplexityScore score;
    // score.value scaled to the whole stream: value * n / bits_scored, where
    // bits_scored excludes both the partition remainder and the bits the
    // block tiling drops. This is the quantity spikes are detected on.
    double value = 0.0;
    bool flagged = false;  // the measure rejected this layout; see error
    std::string error;
};

struct ScoreSeries {
    Measure measure = Measure::BDM;
    std::vector<SweepPoint> points;             // ordered by leading dimension
    std::vector<PartitionCandidate> skipped;    // remainder over the limit
    bool truncated = false;
};

ScoreSeries sweep(const BitString& x, const SweepOptions& options);

struct Spike {
    PartitionCandidate candidate;
    double depth = 0.0;
    double score = 0.0;
};

struct SpikeReport {
    std::vector<Spike> ranked;  // deepest first
    std::size_t window = 0;
    std::string method = "LocalMedianZ";
};

inline constexpr std::size_t kDefaultSpikeWindow = 15;
inline constexpr double kDefaultSpikeThreshold = 3.0;
inline constexpr double kMadFloor = 1e-9;

// Downward spikes: depth = (local median - score) / local MAD over a window
// of unflagged points centred on each point (shifted inwards at the ends).
SpikeReport detect_spikes(const ScoreSeries& series, std::size_t window = kDefaultSpikeWindow,
                          double z_threshold = kDefaultSpikeThreshold);

struct Variant {
    std::string tag;
    Grid grid;
};

// The reshaped grid plus its symmetry images: transpose and the two mirrors
// in 2D, the axis permutations in 3D. A layout with a single non-unit
// dimension is a plain stream and yields only itself.
std::vector<Variant> reconstruct(const BitString& x, const PartitionCandidate& c);

Grid transpose(const Grid& g);
Grid mirror(const Grid& g, std::size_t axis);
Grid permute_axes(const Grid& g, const std::vector<std::size_t>& order);

}  // namespace dimdecon
