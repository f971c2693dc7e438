#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "dimdecon/bits.hpp"

namespace dimdecon {

enum class BinarizationScheme {
    VowelMap,  // 1 for a, e, i, o, u in either case
    SpaceMap,  // 1 for ' '
    Ascii8,    // 8 bits per character, most significant first
};

BinarizationScheme parse_binarization(std::string_view name);  // "vowel", "space", "ascii8"

BitString binarize_text(std::string_view text, BinarizationScheme scheme);

enum class PbmFormat { Plain, Raw };  // P1, P4

// Netpbm bitmaps; 1 is black. Reads P1 and P4, '#' comments allowed in the
// header. Grid dims are (width, height).
Grid read_pbm(std::istream& in);
Grid read_pbm(const std::filesystem::path& path);
void write_pbm(const Grid& g, std::ostream& out, PbmFormat format = PbmFormat::Plain);
void write_pbm(const Grid& g, const std::filesystem::path& path, PbmFormat format = PbmFormat::Plain);

// Text bit streams: '0' and '1', whitespace ignored.
BitString read_bits(std::istream& in);
BitString read_bits(const std::filesystem::path& path);
void write_bits(const BitString& x, std::ostream& out, std::size_t line_width = 0);
void write_bits(const BitString& x, const std::filesystem::path& path, std::size_t line_width = 0);

}  // namespace dimdecon
