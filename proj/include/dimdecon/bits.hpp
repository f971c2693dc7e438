#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dimdecon {

using Bit = std::uint8_t;
using Dims = std::vector<std::size_t>;

// A finite bit sequence. One byte per bit; values are always 0 or 1.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t length, Bit fill = 0);
    explicit BitString(std::vector<Bit> bits);

    // Parses a literal such as "0110"; any other character throws.
    static BitString parse(std::string_view text);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    Bit operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, Bit b) { bits_[i] = b & 1u; }
    void flip(std::size_t i) { bits_[i] ^= 1u; }
    void push_back(Bit b) { bits_.push_back(b & 1u); }

    std::span<const Bit> bits() const { return bits_; }
    const Bit* data() const { return bits_.data(); }

    BitString slice(std::size_t pos, std::size_t len) const;
    BitString complemented() const;
    BitString reversed() const;
    std::size_t count_ones() const;

    // Packs MSB-first into bytes, zero padding the final byte.
    std::vector<std::uint8_t> pack() const;
    static BitString unpack(std::span<const std::uint8_t> bytes, std::size_t nbits);

    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::vector<Bit> bits_;
};

std::size_t hamming_distance(const BitString& a, const BitString& b);

// Dense k-dimensional bit array, 1 <= k <= 3.
//
// Flattening is row-major with the first dimension as width: the cell at
// coordinates (x, y, z) lives at x + width * (y + height * z).
class Grid {
public:
    Grid() = default;
    Grid(Dims dims, std::vector<Bit> data);
    Grid(Dims dims, Bit fill = 0);

    const Dims& dims() const { return dims_; }
    std::size_t ndim() const { return dims_.size(); }
    std::size_t size() const { return data_.size(); }

    Bit at(std::size_t x, std::size_t y = 0, std::size_t z = 0) const {
        return data_[index(x, y, z)];
    }
    void set(std::size_t x, std::size_t y, std::size_t z, Bit b) { data_[index(x, y, z)] = b & 1u; }

    std::span<const Bit> data() const { return data_; }
    BitString flatten() const { return BitString(data_); }

    std::size_t width() const { return dims_[0]; }
    std::size_t height() const { return dims_.size() > 1 ? dims_[1] : 1; }
    std::size_t depth() const { return dims_.size() > 2 ? dims_[2] : 1; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
        return x + width() * (y + height() * z);
    }

    Dims dims_;
    std::vector<Bit> data_;
};

std::size_t product(const Dims& dims);

// "23x73" style formatting and parsing.
std::string format_dims(const Dims& dims);
Dims parse_dims(std::string_view text);

}  // namespace dimdecon
