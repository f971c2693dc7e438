// Acceptance runs. Prints one line per criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dimdecon/codec.hpp"
#include "dimdecon/ctm.hpp"
#include "dimdecon/measures.hpp"
#include "dimdecon/partition.hpp"
#include "dimdecon/perturb.hpp"
#include "dimdecon/rng.hpp"
#include "naive_tm.hpp"
#include "support.hpp"

using namespace dimdecon;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
    std::cout << id << ' ' << (ok ? "PASS" : "FAIL") << ' ' << detail << std::endl;
    if (!ok) ++failures;
}

bool in_top(const SpikeReport& r, std::size_t k, std::initializer_list<std::size_t> widths) {
    for (std::size_t i = 0; i < r.ranked.size() && i < k; ++i) {
        if (std::find(widths.begin(), widths.end(), r.ranked[i].candidate.leading()) != widths.end()) return true;
    }
    return false;
}

SweepOptions bdm_sweep(const CtmTable& t) {
    SweepOptions o;
    o.measure.measure = Measure::BDM;
    o.measure.table = &t;
    o.jobs = jobs();
    return o;
}

BitString glyphs() { return read_bits(testing::fixture("glyphs_23x73.bits")); }

void a1() {
    const auto t0 = Clock::now();
    const CtmTable t = CtmTable::load(testing::source_path("data/ctm_states3.ctm"));
    const auto x = glyphs();
    const ScoreSeries s = sweep(x, bdm_sweep(t));
    const SpikeReport r = detect_spikes(s);
    const double secs = seconds_since(t0);
    const SweepPoint* best = nullptr;
    for (const auto& p : s.points) {
        if (!p.flagged && (!best || p.value < best->value)) best = &p;
    }
    const std::size_t min_at = best ? best->candidate.leading() : 0;
    const std::size_t top = r.ranked.empty() ? 0 : r.ranked[0].candidate.leading();
    const bool ok = (min_at == 23 || min_at == 73) && (top == 23 || top == 73) && secs < 60.0;
    std::ostringstream d;
    d << "global minimum at width " << min_at << ", top spike " << top;
    if (!r.ranked.empty()) d << " (depth " << r.ranked[0].depth << ")";
    d << ", " << secs << " s";
    report("A1", ok, d.str());
}

void a2() {
    const auto x = glyphs();
    const auto o = bdm_sweep(testing::table3());
    const std::vector<std::size_t> flips{50, 150, 300, 500};
    std::vector<int> hits;
    for (auto f : flips) {
        int h = 0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            h += in_top(detect_spikes(sweep(flip_random(x, f, derive_seed(2, s)), o)), 3, {23, 73});
        }
        hits.push_back(h);
    }
    bool ok = hits[0] >= 16;
    for (std::size_t i = 1; i < hits.size(); ++i) ok = ok && hits[i] <= hits[i - 1] + 1;
    std::ostringstream d;
    d << "top-3 hits over 20 seeds at flips 50/150/300/500:";
    for (auto h : hits) d << ' ' << h;
    report("A2", ok, d.str());
}

void a3() {
    // Amplification widens every feature of the sweep six-fold, so both arms
    // use a six-fold spike window.
    const std::size_t window = 6 * kDefaultSpikeWindow + 1;
    const auto x = glyphs();
    const Grid big = amplify(reshape(x, make_candidate(x.size(), {23, 73})), {6, 6});
    const BitString ax = big.flatten();
    auto amp = bdm_sweep(testing::table3());
    amp.lead_min = 2;
    amp.lead_max = 600;
    const auto plain = bdm_sweep(testing::table3());
    int amp_hits = 0, plain_hits = 0;
    std::map<std::size_t, int> tops;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto ya = flip_random(ax, flip_count_for_rate(ax.size(), 0.165), derive_seed(66, s));
        const auto ra = detect_spikes(sweep(ya, amp), window);
        amp_hits += in_top(ra, 3, {138, 438});
        if (!ra.ranked.empty()) ++tops[ra.ranked[0].candidate.leading()];
        const auto yu = flip_random(x, flip_count_for_rate(x.size(), 0.165), derive_seed(66, s));
        plain_hits += in_top(detect_spikes(sweep(yu, plain), window), 3, {23, 73});
    }
    const auto mode = std::max_element(tops.begin(), tops.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    const std::size_t where = mode == tops.end() ? 0 : mode->first;
    const double gain = (amp_hits - plain_hits) / 20.0;
    std::ostringstream d;
    d << "amplified " << amp_hits << "/20, unamplified " << plain_hits << "/20, gain " << gain
      << ", most frequent amplified top spike " << where;
    report("A3", gain >= 0.25 && where == 138, d.str());
}

void a4() {
    const auto o = bdm_sweep(testing::table3());
    int top_hits = 0, deep = 0;
    double deepest = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        SplitMix64 g(derive_seed(4, s));
        BitString r(1679);
        for (std::size_t i = 0; i < r.size(); ++i) r.set(i, static_cast<Bit>(g.next() & 1u));
        const auto rep = detect_spikes(sweep(r, o));
        top_hits += in_top(rep, 1, {23, 73});
        if (!rep.ranked.empty()) {
            deepest = std::max(deepest, rep.ranked[0].depth);
            deep += rep.ranked[0].depth > 5.0;
        }
    }
    std::ostringstream d;
    d << "top spike at 23/73 in " << top_hits << "/20 runs, depth > 5 in " << deep << "/20 runs (max "
      << deepest << ")";
    report("A4", top_hits <= 2 && deep == 0, d.str());
}

void a5() {
    std::ifstream in(testing::fixture("darwin_400.txt"));
    const std::string text((std::istreambuf_iterator<char>(in)), {});
    const auto x = binarize_text(text, BinarizationScheme::VowelMap);
    std::vector<std::size_t> sched;
    for (std::size_t i = 1; i <= 100; ++i) sched.push_back(i);
    MeasureConfig m;
    m.measure = Measure::BDM;
    m.table = &testing::table3();
    const auto c = perturbation_curve(x, sched, PerturbationKind::FlipRandom, m, 20, 1, jobs());
    std::size_t rises = 0;
    for (std::size_t i = 1; i < c.steps.size(); ++i) rises += c.steps[i].mean > c.steps[i - 1].mean;
    const std::size_t pairs = c.steps.size() - 1;
    MeasureConfig e;
    e.measure = Measure::BlockEntropy;
    e.block_shape = Dims{1};
    const auto ce = perturbation_curve(x, sched, PerturbationKind::FlipRandom, e, 20, 1, jobs());
    double lo = ce.base_score, hi = ce.base_score;
    for (const auto& s : ce.steps) {
        lo = std::min(lo, s.mean);
        hi = std::max(hi, s.mean);
    }
    const double spread = (hi - lo) / ce.base_score;
    std::ostringstream d;
    d << "bdm rises on " << rises << "/" << pairs << " steps, block entropy (length 1) varies " << 100 * spread
      << "%";
    report("A5", rises >= 0.9 * static_cast<double>(pairs) && spread < 0.02, d.str());
}

void a6() {
    const auto x = read_bits(testing::fixture("runs_8000.bits"));
    const double base = compress_score(x).value;
    int ok = 0;
    for (std::uint64_t s = 0; s < 100; ++s) ok += compress_score(scramble_segments(x, 64, derive_seed(6, s))).value >= base;
    std::ostringstream d;
    d << "scrambled >= original in " << ok << "/100 seeds (" << x.size() << " bits, base " << base << ")";
    report("A6", ok >= 90, d.str());
}

void a7() {
    const MachineClass cls{2, 50};
    std::size_t mismatches = 0;
    for (std::uint64_t i = 0; i < cls.machine_count(); ++i) {
        const RunResult r = run_machine(cls, i);
        const auto o = testing::naive_run(2, i, 50);
        if (r.halted != o.halted || (o.halted && r.output.to_string() != o.output)) ++mismatches;
    }
    const CtmTable& t = testing::table2();
    bool symmetric = true;
    double sum = 0;
    for (const auto& [code, k] : t.entries()) {
        const auto v = t.value(complement_block(code));
        const auto w = t.value(reverse_block(code));
        symmetric = symmetric && !v.fallback && !w.fallback && v.k_bits == k && w.k_bits == k;
        sum += std::exp2(-k);
    }
    bool raw_reversal = true;
    for (const auto& [code, c] : t.counts()) {
        const auto it = t.counts().find(reverse_block(code));
        raw_reversal = raw_reversal && it != t.counts().end() && it->second == c;
    }
    std::ostringstream d;
    d << cls.machine_count() << " machines, " << mismatches << " mismatches against the naive simulator, "
      << "symmetry " << (symmetric && raw_reversal ? "exact" : "broken") << ", semimeasure sum " << sum;
    report("A7", mismatches == 0 && symmetric && raw_reversal && std::abs(sum - 1.0) < 1e-12, d.str());
}

void a8() {
    const CtmTable& t = testing::table3();
    std::size_t checked = 0, covered8 = 0, bad = 0;
    for (const auto& [code, k] : t.entries()) {
        const BitString b = decode_block(code);
        const unsigned len = block_length(code);
        const Grid one({len}, std::vector<Bit>(b.bits().begin(), b.bits().end()));
        if (bdm(one, {len}, t).value != ctm_value(t, b)) ++bad;
        for (std::size_t copies : {2u, 3u, 7u, 64u}) {
            std::vector<Bit> cells;
            for (std::size_t c = 0; c < copies; ++c) cells.insert(cells.end(), b.bits().begin(), b.bits().end());
            const Grid g({len * copies}, cells);
            const double expect = ctm_value(t, b) + std::log2(static_cast<double>(copies));
            if (std::abs(bdm(g, {len}, t).value - expect) > 1e-9) ++bad;
        }
        ++checked;
        covered8 += len == 8;
    }
    // 8-bit blocks laid out as the default 2x4 grid block.
    for (BlockCode code : {BlockCode{0x100}, BlockCode{0x1A5}, BlockCode{0x1FF}}) {
        const BitString b = decode_block(code);
        const Grid g({2, 4}, std::vector<Bit>(b.bits().begin(), b.bits().end()));
        if (bdm(g, {2, 4}, t).value != ctm_value(t, b)) ++bad;
        Grid five({10, 4});
        for (std::size_t c = 0; c < 5; ++c) {
            for (std::size_t y = 0; y < 4; ++y) {
                for (std::size_t xx = 0; xx < 2; ++xx) five.set(2 * c + xx, y, 0, g.at(xx, y));
            }
        }
        if (std::abs(bdm(five, {2, 4}, t).value - (ctm_value(t, b) + std::log2(5.0))) > 1e-9) ++bad;
    }
    std::ostringstream d;
    d << checked << " covered blocks (lengths 1.." << t.max_covered_len() << ", " << covered8
      << " of length 8) and 3 fallback 8-bit blocks, " << bad << " mismatches";
    report("A8", bad == 0, d.str());
}

void a9() {
    const auto x = read_bits(testing::fixture("voxels_16x16x16.bits"));
    auto o = bdm_sweep(testing::table3());
    o.ndim = 3;
    const auto r = detect_spikes(sweep(x, o));
    std::vector<std::size_t> top;
    for (std::size_t i = 0; i < r.ranked.size() && i < 5; ++i) top.push_back(r.ranked[i].candidate.leading());
    bool multiples = true;
    for (std::size_t w : {16u, 32u, 48u}) multiples = multiples && std::find(top.begin(), top.end(), w) != top.end();
    const Grid original({16, 16, 16}, std::vector<Bit>(x.bits().begin(), x.bits().begin() + 4096));
    bool has_original = false;
    for (const auto& v : reconstruct(x, make_candidate(x.size(), {16, 16, 16}))) has_original |= v.grid == original;
    std::ostringstream d;
    d << "top-5 leading dims:";
    for (auto w : top) d << ' ' << w;
    d << "; original grid " << (has_original ? "in" : "missing from") << " the variant set";
    report("A9", multiples && has_original, d.str());
}

void a10() {
    SplitMix64 g(10);
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        // random bytes, a four-letter alphabet, or a single repeated byte
        const std::size_t len = i == 0 ? 0 : static_cast<std::size_t>(g.below(10001));
        std::vector<std::uint8_t> p(len);
        for (auto& b : p) {
            const std::uint64_t v = g.next();
            b = i % 3 == 0 ? static_cast<std::uint8_t>(v) : i % 3 == 1 ? static_cast<std::uint8_t>(v & 3u) : 'a';
        }
        if (lz_decompress(lz_compress(p)) != p) ++bad;
    }
    SplitMix64 r(42);
    std::vector<std::uint8_t> random(1024);
    for (auto& b : random) b = static_cast<std::uint8_t>(r.next());
    const std::size_t rs = lz_compress(random).size();
    const std::size_t zs = lz_compress(std::vector<std::uint8_t>(1024, 0)).size();
    std::ostringstream d;
    d << "1000 round trips with " << bad << " failures; random 1024 bytes -> " << rs << ", zeros -> " << zs;
    report("A10", bad == 0 && rs * 10 >= 1024 * 9 && zs * 8 < 1024, d.str());
}

}  // namespace

int main() {
    try {
        a1();
        a2();
        a3();
        a4();
        a5();
        a6();
        a7();
        a8();
        a9();
        a10();
    } catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << std::endl;
        return 2;
    }
    return failures ? 1 : 0;
}
