#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "dimdecon/bits.hpp"

namespace dimdecon {

// A block of up to 63 bits packed under a sentinel bit: code = 1 << len | bits,
// first bit of the block most significant. Ordering codes numerically orders
// blocks by length, then lexicographically.
using BlockCode = std::uint64_t;

inline constexpr unsigned kMaxBlockBits = 63;

BlockCode encode_block(std::span<const Bit> bits);
inline BlockCode encode_block(const BitString& b) { return encode_block(b.bits()); }
BitString decode_block(BlockCode code);
unsigned block_length(BlockCode code);
BlockCode complement_block(BlockCode code);
BlockCode reverse_block(BlockCode code);

// Two-symbol Turing machines with `states` working states and one halt state.
//
// Machine index i is read in base (4*states + 2); digit j (least significant
// first) is the action for rule j = 2*state + read_symbol. Action codes:
//   a < 4*states : write a % 2, move (a / 2) % 2 (0 = left, 1 = right),
//                  go to state a / 4
//   4*states     : write 0 and halt in place
//   4*states + 1 : write 1 and halt in place
// The machine starts in state 0 on an all-zero tape; every executed rule,
// including the halting one, costs one step.
struct MachineClass {
    int states = 3;
    std::uint64_t step_budget = 200;

    std::uint64_t action_count() const { return 4 * static_cast<std::uint64_t>(states) + 2; }
    std::uint64_t machine_count() const;
    void validate() const;

    friend bool operator==(const MachineClass&, const MachineClass&) = default;
};

inline constexpr int kMaxSupportedStates = 3;

// Longest halting run in each fully supported class (busy beaver step counts
// under the halt-in-place convention above).
std::uint64_t busy_beaver_steps(int states);

struct MachineRange {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;  // exclusive

    std::uint64_t size() const { return end - begin; }
    friend bool operator==(const MachineRange&, const MachineRange&) = default;
};

struct RunResult {
    bool halted = false;
    std::uint64_t steps = 0;
    BitString output;  // visited tape segment, empty unless halted
};

RunResult run_machine(const MachineClass& cls, std::uint64_t index);

struct ShardCounts {
    int shard_id = 0;
    MachineClass machine_class;
    MachineRange range;
    std::map<BlockCode, std::uint64_t> output_counts;
    std::uint64_t halted_total = 0;
    std::uint64_t ran_total = 0;
};

ShardCounts enumerate_shard(const MachineClass& cls, MachineRange range, int shard_id = 0);

// Splits [0, machine_count) into `shards` contiguous ranges and enumerates
// them on up to `jobs` threads. Result order follows shard id.
std::vector<ShardCounts> enumerate_all(const MachineClass& cls, int shards, int jobs);

class CtmTable {
public:
    struct Value {
        double k_bits = 0.0;
        bool fallback = false;
    };

    CtmTable(MachineClass cls, std::map<BlockCode, std::uint64_t> counts, std::uint64_t halted_total,
             std::uint64_t ran_total);

    const MachineClass& machine_class() const { return class_; }
    std::uint64_t halted_total() const { return halted_total_; }
    std::uint64_t ran_total() const { return ran_total_; }

    // Raw halting-output counts as enumerated on the zero tape.
    const std::map<BlockCode, std::uint64_t>& counts() const { return counts_; }

    // Complexity estimates for every covered block. A block is covered if it
    // or its complement was produced; the frequency of x is
    // (count(x) + count(~x)) / (2 * halted_total), i.e. the machines are run
    // on both blank tapes.
    const std::map<BlockCode, double>& entries() const { return entries_; }

    unsigned max_covered_len() const { return max_len_; }
    // Largest L such that every block of length 1..L is covered.
    unsigned complete_len() const { return complete_len_; }
    std::size_t covered_count(unsigned length) const;

    Value value(BlockCode code) const;
    Value value(const BitString& block) const;

    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static CtmTable load(std::istream& in);
    static CtmTable load(const std::filesystem::path& path);

private:
    Value fallback_for(unsigned length) const;

    MachineClass class_;
    std::map<BlockCode, std::uint64_t> counts_;
    std::uint64_t halted_total_ = 0;
    std::uint64_t ran_total_ = 0;
    std::map<BlockCode, double> entries_;
    std::vector<double> max_k_by_len_;  // negative when no block of that length is covered
    std::vector<std::size_t> covered_by_len_;
    unsigned max_len_ = 0;
    unsigned complete_len_ = 0;
    // Dense lookup indexed directly by block code, for lengths up to kDenseBits.
    static constexpr unsigned kDenseBits = 16;
    std::vector<double> dense_k_;
    std::vector<std::uint8_t> dense_fallback_;
};

CtmTable merge_shards(std::span<const ShardCounts> shards);

double ctm_value(const CtmTable& table, const BitString& block);

}  // namespace dimdecon
