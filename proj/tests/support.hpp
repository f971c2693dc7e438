#pragma once

#include <filesystem>
#include <string>

#include "dimdecon/codec.hpp"
#include "dimdecon/ctm.hpp"
#include "dimdecon/rng.hpp"

namespace testing {

inline std::filesystem::path source_path(const std::string& rel) {
    return std::filesystem::path(DIMDECON_SOURCE_DIR) / rel;
}

inline std::filesystem::path fixture(const std::string& name) {
    return source_path("tests/fixtures/" + name);
}

// The committed states=3 table, loaded once.
inline const dimdecon::CtmTable& table3() {
    static const dimdecon::CtmTable t = dimdecon::CtmTable::load(source_path("data/ctm_states3.ctm"));
    return t;
}

// Full states=2 enumeration, built once.
inline const dimdecon::CtmTable& table2() {
    static const dimdecon::CtmTable t = [] {
        dimdecon::MachineClass cls{2, 50};
        auto shards = dimdecon::enumerate_all(cls, 1, 1);
        return dimdecon::merge_shards(shards);
    }();
    return t;
}

inline dimdecon::BitString random_bits(std::size_t n, std::uint64_t seed) {
    dimdecon::SplitMix64 g(seed);
    dimdecon::BitString x(n);
    for (std::size_t i = 0; i < n; ++i) x.set(i, static_cast<dimdecon::Bit>(g.next() & 1u));
    return x;
}

}  // namespace testing
