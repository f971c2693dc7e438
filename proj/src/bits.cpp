#include "dimdecon/bits.hpp"

#include <algorithm>
#include <charconv>

#include "dimdecon/error.hpp"

namespace dimdecon {

BitString::BitString(std::size_t length, Bit fill) : bits_(length, fill & 1u) {}

BitString::BitString(std::vector<Bit> bits) : bits_(std::move(bits)) {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] > 1) {
            throw InvalidArgument("bit value at position " + std::to_string(i) + " is not 0 or 1");
        }
    }
}

BitString BitString::parse(std::string_view text) {
    std::vector<Bit> bits;
    bits.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '0' && c != '1') {
            throw ParseError(std::string("unexpected character '") + c + "' in bit literal", i);
        }
        bits.push_back(static_cast<Bit>(c - '0'));
    }
    BitString out;
    out.bits_ = std::move(bits);
    return out;
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
    if (pos > bits_.size() || len > bits_.size() - pos) {
        throw InvalidArgument("slice out of range");
    }
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                     bits_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return out;
}

BitString BitString::complemented() const {
    BitString out = *this;
    for (auto& b : out.bits_) b ^= 1u;
    return out;
}

BitString BitString::reversed() const {
    BitString out = *this;
    std::reverse(out.bits_.begin(), out.bits_.end());
    return out;
}

std::size_t BitString::count_ones() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), Bit{1}));
}

std::vector<std::uint8_t> BitString::pack() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

BitString BitString::unpack(std::span<const std::uint8_t> bytes, std::size_t nbits) {
    if (nbits > bytes.size() * 8) {
        throw InvalidArgument("not enough bytes to unpack " + std::to_string(nbits) + " bits");
    }
    BitString out;
    out.bits_.resize(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
        out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    }
    return out;
}

std::string BitString::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s[i] = '1';
    }
    return s;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("hamming distance of strings with different lengths");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

std::size_t product(const Dims& dims) {
    std::size_t p = 1;
    for (auto d : dims) p *= d;
    return p;
}

namespace {

void check_dims(const Dims& dims) {
    if (dims.empty() || dims.size() > 3) {
        throw InvalidArgument("grids must have 1 to 3 dimensions, got " + std::to_string(dims.size()));
    }
    for (auto d : dims) {
        if (d == 0) throw InvalidArgument("grid dimensions must be positive: " + format_dims(dims));
    }
}

}  // namespace

Grid::Grid(Dims dims, std::vector<Bit> data) : dims_(std::move(dims)), data_(std::move(data)) {
    check_dims(dims_);
    if (data_.size() != product(dims_)) {
        throw InvalidArgument("grid " + format_dims(dims_) + " needs " + std::to_string(product(dims_)) +
                              " bits, got " + std::to_string(data_.size()));
    }
    for (auto& b : data_) {
        if (b > 1) throw InvalidArgument("grid cell value is not 0 or 1");
    }
}

Grid::Grid(Dims dims, Bit fill) : dims_(std::move(dims)) {
    check_dims(dims_);
    data_.assign(product(dims_), fill & 1u);
}

std::string format_dims(const Dims& dims) {
    std::string s;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(dims[i]);
    }
    return s;
}

Dims parse_dims(std::string_view text) {
    Dims dims;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('x', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto part = text.substr(pos, end - pos);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() || value == 0) {
            throw InvalidArgument("bad dimension list '" + std::string(text) + "'");
        }
        dims.push_back(value);
        pos = end + 1;
    }
    if (dims.size() > 3) throw InvalidArgument("at most 3 dimensions supported: '" + std::string(text) + "'");
    return dims;
}

}  // namespace dimdecon
