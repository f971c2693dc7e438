#include "dimdecon/codec.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "dimdecon/error.hpp"

namespace dimdecon {

BinarizationScheme parse_binarization(std::string_view name) {
    if (name == "vowel") return BinarizationScheme::VowelMap;
    if (name == "space") return BinarizationScheme::SpaceMap;
    if (name == "ascii8") return BinarizationScheme::Ascii8;
    throw InvalidArgument("unknown binarization '" + std::string(name) + "' (expected vowel, space or ascii8)");
}

BitString binarize_text(std::string_view text, BinarizationScheme scheme) {
    BitString out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        switch (scheme) {
            case BinarizationScheme::VowelMap: {
                const char lower = static_cast<char>(c | 0x20);
                out.push_back(std::isalpha(c) && (lower == 'a' || lower == 'e' || lower == 'i' || lower == 'o' ||
                                                  lower == 'u'));
                break;
            }
            case BinarizationScheme::SpaceMap: out.push_back(c == ' '); break;
            case BinarizationScheme::Ascii8:
                if (c > 0x7F) throw ParseError("non-ASCII character in text", i);
                for (int b = 7; b >= 0; --b) out.push_back(static_cast<Bit>((c >> b) & 1u));
                break;
        }
    }
    return out;
}

namespace {

class ByteCursor {
public:
    explicit ByteCursor(std::istream& in) : data_(std::istreambuf_iterator<char>(in), {}) {}

    bool done() const { return pos_ >= data_.size(); }
    std::size_t pos() const { return pos_; }
    int peek() const { return done() ? -1 : static_cast<unsigned char>(data_[pos_]); }
    int get() { return done() ? -1 : static_cast<unsigned char>(data_[pos_++]); }

    // Whitespace and '#' comments between header tokens.
    void skip_space() {
        while (!done()) {
            const int c = peek();
            if (c == '#') {
                while (!done() && peek() != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t read_uint(const char* what) {
        skip_space();
        const std::size_t start = pos_;
        std::size_t v = 0;
        while (!done() && std::isdigit(peek())) {
            v = v * 10 + static_cast<std::size_t>(get() - '0');
            if (v > (std::size_t{1} << 32)) throw ParseError(std::string(what) + " too large", start);
        }
        if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
        return v;
    }

private:
    std::string data_;
    std::size_t pos_ = 0;
};

}  // namespace

Grid read_pbm(std::istream& in) {
    ByteCursor cur(in);
    if (cur.get() != 'P') throw ParseError("not a PBM file (missing 'P' magic)", 0);
    const int kind = cur.get();
    if (kind != '1' && kind != '4') throw ParseError("unsupported Netpbm magic (expected P1 or P4)", 1);
    const std::size_t width = cur.read_uint("width");
    const std::size_t height = cur.read_uint("height");
    if (width == 0 || height == 0) throw ParseError("PBM dimensions must be positive", cur.pos());

    std::vector<Bit> data;
    data.reserve(width * height);
    if (kind == '1') {
        while (data.size() < width * height) {
            cur.skip_space();
            const std::size_t at = cur.pos();
            const int c = cur.get();
            if (c == -1) throw ParseError("PBM raster truncated", at);
            if (c != '0' && c != '1') throw ParseError("unexpected character in P1 raster", at);
            data.push_back(static_cast<Bit>(c - '0'));
        }
        cur.skip_space();
        if (!cur.done()) throw ParseError("trailing data after P1 raster", cur.pos());
    } else {
        const std::size_t at = cur.pos();
        const int sep = cur.get();
        if (sep == -1 || !std::isspace(sep)) throw ParseError("expected whitespace before P4 raster", at);
        const std::size_t row_bytes = (width + 7) / 8;
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t bx = 0; bx < row_bytes; ++bx) {
                const std::size_t pos = cur.pos();
                const int byte = cur.get();
                if (byte == -1) throw ParseError("P4 raster truncated", pos);
                for (std::size_t k = 0; k < 8 && bx * 8 + k < width; ++k) {
                    data.push_back(static_cast<Bit>((byte >> (7 - k)) & 1));
                }
            }
        }
        if (!cur.done()) throw ParseError("trailing data after P4 raster", cur.pos());
    }
    return Grid({width, height}, std::move(data));
}

Grid read_pbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_pbm(in);
}

void write_pbm(const Grid& g, std::ostream& out, PbmFormat format) {
    if (g.ndim() > 2) throw InvalidArgument("PBM holds 1D or 2D grids only");
    const std::size_t w = g.width(), h = g.height();
    if (format == PbmFormat::Plain) {
        out << "P1\n" << w << ' ' << h << '\n';
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                out.put(g.at(x, y) ? '1' : '0');
                // Netpbm recommends lines of at most 70 characters.
                if ((x + 1) % 70 == 0 && x + 1 < w) out.put('\n');
            }
            out.put('\n');
        }
    } else {
        out << "P4\n" << w << ' ' << h << '\n';
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t bx = 0; bx < (w + 7) / 8; ++bx) {
                unsigned byte = 0;
                for (std::size_t k = 0; k < 8; ++k) {
                    const std::size_t x = bx * 8 + k;
                    byte = (byte << 1) | (x < w ? g.at(x, y) : 0u);
                }
                out.put(static_cast<char>(byte));
            }
        }
    }
}

void write_pbm(const Grid& g, const std::filesystem::path& path, PbmFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_pbm(g, out, format);
}

BitString read_bits(std::istream& in) {
    BitString out;
    std::size_t offset = 0;
    for (std::istreambuf_iterator<char> it(in), end; it != end; ++it, ++offset) {
        const char c = *it;
        if (c == '0' || c == '1') {
            out.push_back(static_cast<Bit>(c - '0'));
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            throw ParseError(std::string("unexpected character '") + c + "' in bit stream", offset);
        }
    }
    return out;
}

BitString read_bits(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_bits(in);
}

void write_bits(const BitString& x, std::ostream& out, std::size_t line_width) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.put(x[i] ? '1' : '0');
        if (line_width && (i + 1) % line_width == 0 && i + 1 < x.size()) out.put('\n');
    }
    out.put('\n');
}

void write_bits(const BitString& x, const std::filesystem::path& path, std::size_t line_width) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_bits(x, out, line_width);
}

}  // namespace dimdecon
