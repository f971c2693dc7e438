#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dimdecon/bits.hpp"
#include "dimdecon/ctm.hpp"

namespace dimdecon {

enum class Measure { BlockEntropy, CompressLen, BDM };

std::string_view measure_name(Measure m);  // "entropy", "compress", "bdm"
Measure parse_measure(std::string_view name);

struct ComplexityScore {
    Measure measure = Measure::BDM;
    double value = 0.0;
    std::optional<double> fallback_fraction;  // BDM only
    std::size_t blocks = 0;                   // blocks scored (entropy, BDM)
    std::size_t dropped_bits = 0;             // bits outside the block tiling
    std::size_t pad_bits = 0;                 // zero bits appended to fill the last byte (compression)
    bool warning = false;                     // input shorter than one block
};

// Empirical Shannon entropy of the non-overlapping block_len-bit blocks of x,
// in bits per block, times the number of blocks.
ComplexityScore block_entropy(const BitString& x, std::size_t block_len);
ComplexityScore block_entropy(const Grid& g, const Dims& block_shape);

// LZ78 with bit-packed phrase indices. Output starts with the input length
// as a 4-byte big-endian integer.
std::vector<std::uint8_t> lz_compress(std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> lz_decompress(std::span<const std::uint8_t> stream);

// 8 x compressed length of the MSB-first packed bits.
ComplexityScore compress_score(const BitString& x);
// Grids are serialized tile by tile (block_shape tiles, each row-major)
// before compression, so the score depends on the layout.
ComplexityScore compress_score(const Grid& g, const Dims& block_shape);

// Sum over distinct blocks of CTM(block) + log2(multiplicity). Blocks tile
// the grid from the origin; partial blocks at the far edges are dropped.
ComplexityScore bdm(const Grid& g, const Dims& block_shape, const CtmTable& table);

// Non-overlapping blocks of `block_shape` in tile order, each flattened
// row-major into a BlockCode. Throws if the block does not fit in the grid.
std::vector<BlockCode> tile_blocks(const Grid& g, const Dims& block_shape, std::size_t* dropped_bits = nullptr);

// 8-bit blocks (2x4, 2x2x2) for grids. Strings use 8-bit blocks for entropy
// and compression but 3-bit blocks for BDM, which the 3-state table covers.
Dims default_block_shape(std::size_t ndim, Measure measure = Measure::BDM);

struct MeasureConfig {
    Measure measure = Measure::BDM;
    std::optional<Dims> block_shape;  // defaults to default_block_shape(ndim)
    const CtmTable* table = nullptr;  // required for BDM
};

ComplexityScore score(const Grid& g, const MeasureConfig& config);
// A stream scored as a 1-dimensional grid.
ComplexityScore score(const BitString& x, const MeasureConfig& config);

}  // namespace dimdecon
