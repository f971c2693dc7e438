#include "dimdecon/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "dimdecon/error.hpp"

namespace dimdecon {

std::string_view measure_name(Measure m) {
    switch (m) {
        case Measure::BlockEntropy: return "entropy";
        case Measure::CompressLen: return "compress";
        case Measure::BDM: return "bdm";
    }
    return "unknown";
}

Measure parse_measure(std::string_view name) {
    if (name == "entropy") return Measure::BlockEntropy;
    if (name == "compress") return Measure::CompressLen;
    if (name == "bdm") return Measure::BDM;
    throw InvalidArgument("unknown measure '" + std::string(name) + "' (expected entropy, compress or bdm)");
}

Dims default_block_shape(std::size_t ndim, Measure measure) {
    switch (ndim) {
        case 1: return measure == Measure::BDM ? Dims{3} : Dims{8};
        case 2: return {2, 4};
        case 3: return {2, 2, 2};
        default: throw InvalidArgument("no default block shape for " + std::to_string(ndim) + " dimensions");
    }
}

std::vector<BlockCode> tile_blocks(const Grid& g, const Dims& block_shape, std::size_t* dropped_bits) {
    if (block_shape.size() != g.ndim()) {
        throw InvalidArgument("block shape " + format_dims(block_shape) + " does not match grid " +
                              format_dims(g.dims()));
    }
    for (std::size_t i = 0; i < block_shape.size(); ++i) {
        if (block_shape[i] == 0) throw InvalidArgument("block dimensions must be positive");
        if (block_shape[i] > g.dims()[i]) {
            throw InvalidArgument("block " + format_dims(block_shape) + " is larger than grid " +
                                  format_dims(g.dims()));
        }
    }
    if (product(block_shape) > kMaxBlockBits) {
        throw Unsupported("blocks of more than " + std::to_string(kMaxBlockBits) + " bits are not supported");
    }
    const std::size_t bw = block_shape[0];
    const std::size_t bh = block_shape.size() > 1 ? block_shape[1] : 1;
    const std::size_t bd = block_shape.size() > 2 ? block_shape[2] : 1;
    const std::size_t tx = g.width() / bw, ty = g.height() / bh, tz = g.depth() / bd;

    std::vector<BlockCode> codes;
    codes.reserve(tx * ty * tz);
    const auto data = g.data();
    const std::size_t w = g.width(), plane = g.width() * g.height();
    for (std::size_t z = 0; z < tz; ++z) {
        for (std::size_t y = 0; y < ty; ++y) {
            for (std::size_t x = 0; x < tx; ++x) {
                BlockCode code = 1;
                for (std::size_t dz = 0; dz < bd; ++dz) {
                    for (std::size_t dy = 0; dy < bh; ++dy) {
                        const std::size_t row = (z * bd + dz) * plane + (y * bh + dy) * w + x * bw;
                        for (std::size_t dx = 0; dx < bw; ++dx) code = (code << 1) | data[row + dx];
                    }
                }
                codes.push_back(code);
            }
        }
    }
    if (dropped_bits) *dropped_bits = g.size() - codes.size() * product(block_shape);
    return codes;
}

namespace {

double entropy_of_codes(const std::vector<BlockCode>& codes) {
    std::unordered_map<BlockCode, std::size_t> freq;
    for (auto c : codes) ++freq[c];
    const double n = static_cast<double>(codes.size());
    double h = 0.0;
    for (const auto& [c, k] : freq) {
        const double p = static_cast<double>(k) / n;
        h -= p * std::log2(p);
    }
    return h * n;
}

}  // namespace

ComplexityScore block_entropy(const BitString& x, std::size_t block_len) {
    if (block_len == 0) throw InvalidArgument("block length must be positive");
    ComplexityScore s;
    s.measure = Measure::BlockEntropy;
    if (x.size() < block_len) {
        s.warning = true;
        s.dropped_bits = x.size();
        return s;
    }
    const Grid g({x.size()}, std::vector<Bit>(x.bits().begin(), x.bits().end()));
    const auto codes = tile_blocks(g, {block_len}, &s.dropped_bits);
    s.blocks = codes.size();
    s.value = entropy_of_codes(codes);
    return s;
}

ComplexityScore block_entropy(const Grid& g, const Dims& block_shape) {
    ComplexityScore s;
    s.measure = Measure::BlockEntropy;
    const auto codes = tile_blocks(g, block_shape, &s.dropped_bits);
    s.blocks = codes.size();
    s.value = entropy_of_codes(codes);
    return s;
}

namespace {

// Dictionary reset threshold; both sides start over with only the empty phrase.
constexpr std::size_t kMaxDictionary = std::size_t{1} << 16;

class BitWriter {
public:
    explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    void write(std::uint32_t value, unsigned nbits) {
        for (unsigned i = nbits; i-- > 0;) {
            acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((value >> i) & 1u));
            if (++fill_ == 8) {
                out_.push_back(acc_);
                acc_ = 0;
                fill_ = 0;
            }
        }
    }

    void flush() {
        if (fill_) out_.push_back(static_cast<std::uint8_t>(acc_ << (8 - fill_)));
        acc_ = 0;
        fill_ = 0;
    }

private:
    std::vector<std::uint8_t>& out_;
    std::uint8_t acc_ = 0;
    unsigned fill_ = 0;
};

class BitReader {
public:
    BitReader(std::span<const std::uint8_t> in, std::size_t start) : in_(in), pos_(start * 8) {}

    std::uint32_t read(unsigned nbits) {
        if (remaining() < nbits) throw DecodeError("compressed stream truncated");
        std::uint32_t v = 0;
        for (unsigned i = 0; i < nbits; ++i, ++pos_) v = (v << 1) | ((in_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
        return v;
    }

    std::size_t remaining() const { return in_.size() * 8 - pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_;
};

unsigned index_width(std::size_t dict_size) { return static_cast<unsigned>(std::bit_width(dict_size - 1)); }

}  // namespace

std::vector<std::uint8_t> lz_compress(std::span<const std::uint8_t> payload) {
    if (payload.size() > 0xFFFFFFFFull) throw InvalidArgument("payload too large for the 4-byte length header");
    std::vector<std::uint8_t> out;
    const auto n = static_cast<std::uint32_t>(payload.size());
    out.push_back(static_cast<std::uint8_t>(n >> 24));
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    out.push_back(static_cast<std::uint8_t>(n >> 8));
    out.push_back(static_cast<std::uint8_t>(n));

    BitWriter bits(out);
    // Trie edges keyed by (node << 8 | byte); node 0 is the empty phrase.
    std::unordered_map<std::uint64_t, std::uint32_t> trie;
    std::size_t dict_size = 1;
    std::uint32_t node = 0;
    for (std::uint8_t byte : payload) {
        const std::uint64_t key = (std::uint64_t{node} << 8) | byte;
        if (const auto it = trie.find(key); it != trie.end()) {
            node = it->second;
            continue;
        }
        bits.write(node, index_width(dict_size));
        bits.write(byte, 8);
        trie.emplace(key, static_cast<std::uint32_t>(dict_size));
        if (++dict_size == kMaxDictionary) {
            trie.clear();
            dict_size = 1;
        }
        node = 0;
    }
    if (node != 0) bits.write(node, index_width(dict_size));
    bits.flush();
    return out;
}

std::vector<std::uint8_t> lz_decompress(std::span<const std::uint8_t> stream) {
    if (stream.size() < 4) throw DecodeError("compressed stream shorter than its length header");
    const std::size_t n = (std::size_t{stream[0]} << 24) | (std::size_t{stream[1]} << 16) |
                          (std::size_t{stream[2]} << 8) | std::size_t{stream[3]};
    std::vector<std::uint8_t> out;
    out.reserve(n);

    struct Phrase {
        std::uint32_t parent;
        std::uint32_t length;
        std::uint8_t byte;
    };
    std::vector<Phrase> dict{{0, 0, 0}};
    std::vector<std::uint8_t> scratch;
    BitReader bits(stream, 4);

    while (out.size() < n) {
        const std::uint32_t index = bits.read(index_width(dict.size()));
        if (index >= dict.size()) throw DecodeError("phrase index " + std::to_string(index) + " not in dictionary");
        const std::size_t len = dict[index].length;
        if (out.size() + len > n) throw DecodeError("phrase overruns the declared length");
        scratch.clear();
        for (std::uint32_t p = index; p != 0; p = dict[p].parent) scratch.push_back(dict[p].byte);
        out.insert(out.end(), scratch.rbegin(), scratch.rend());
        if (out.size() == n) {
            if (index == 0) throw DecodeError("empty final phrase");
            break;
        }
        const auto byte = static_cast<std::uint8_t>(bits.read(8));
        out.push_back(byte);
        dict.push_back({index, static_cast<std::uint32_t>(len + 1), byte});
        if (dict.size() == kMaxDictionary) dict.resize(1);
    }
    if (bits.remaining() >= 8) throw DecodeError("trailing data after compressed stream");
    if (bits.remaining() > 0 && bits.read(static_cast<unsigned>(bits.remaining())) != 0) {
        throw DecodeError("non-zero padding bits");
    }
    return out;
}

ComplexityScore compress_score(const BitString& x) {
    ComplexityScore s;
    s.measure = Measure::CompressLen;
    const auto packed = x.pack();
    s.pad_bits = packed.size() * 8 - x.size();
    s.value = 8.0 * static_cast<double>(lz_compress(packed).size());
    return s;
}

ComplexityScore compress_score(const Grid& g, const Dims& block_shape) {
    if (g.ndim() == 1) return compress_score(g.flatten());
    std::size_t dropped = 0;
    const auto codes = tile_blocks(g, block_shape, &dropped);
    const auto bits_per_block = static_cast<unsigned>(product(block_shape));
    BitString serial;
    for (auto code : codes) {
        for (unsigned i = bits_per_block; i-- > 0;) serial.push_back(static_cast<Bit>((code >> i) & 1u));
    }
    ComplexityScore s = compress_score(serial);
    s.blocks = codes.size();
    s.dropped_bits = dropped;
    return s;
}

ComplexityScore bdm(const Grid& g, const Dims& block_shape, const CtmTable& table) {
    ComplexityScore s;
    s.measure = Measure::BDM;
    auto codes = tile_blocks(g, block_shape, &s.dropped_bits);
    s.blocks = codes.size();
    std::sort(codes.begin(), codes.end());
    std::size_t distinct = 0, fallbacks = 0;
    for (std::size_t i = 0; i < codes.size();) {
        std::size_t j = i;
        while (j < codes.size() && codes[j] == codes[i]) ++j;
        const auto v = table.value(codes[i]);
        s.value += v.k_bits + std::log2(static_cast<double>(j - i));
        ++distinct;
        fallbacks += v.fallback;
        i = j;
    }
    s.fallback_fraction = distinct ? static_cast<double>(fallbacks) / static_cast<double>(distinct) : 0.0;
    return s;
}

ComplexityScore score(const Grid& g, const MeasureConfig& config) {
    const Dims shape = config.block_shape ? *config.block_shape : default_block_shape(g.ndim(), config.measure);
    switch (config.measure) {
        case Measure::BlockEntropy: return block_entropy(g, shape);
        case Measure::CompressLen: return compress_score(g, shape);
        case Measure::BDM:
            if (!config.table) throw InvalidArgument("BDM needs a CTM table");
            return bdm(g, shape, *config.table);
    }
    throw InvalidArgument("unknown measure");
}

ComplexityScore score(const BitString& x, const MeasureConfig& config) {
    if (x.empty()) throw InvalidArgument("cannot score an empty stream");
    const Grid g({x.size()}, std::vector<Bit>(x.bits().begin(), x.bits().end()));
    return score(g, config);
}

}  // namespace dimdecon
