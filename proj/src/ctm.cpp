#include "dimdecon/ctm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>

#include "dimdecon/error.hpp"

namespace dimdecon {

BlockCode encode_block(std::span<const Bit> bits) {
    if (bits.empty()) throw InvalidArgument("empty block");
    if (bits.size() > kMaxBlockBits) {
        throw Unsupported("blocks longer than " + std::to_string(kMaxBlockBits) + " bits are not supported");
    }
    BlockCode code = 1;
    for (Bit b : bits) code = (code << 1) | (b & 1u);
    return code;
}

unsigned block_length(BlockCode code) {
    return static_cast<unsigned>(std::bit_width(code)) - 1;
}

BitString decode_block(BlockCode code) {
    const unsigned len = block_length(code);
    BitString out(len);
    for (unsigned i = 0; i < len; ++i) out.set(i, static_cast<Bit>((code >> (len - 1 - i)) & 1u));
    return out;
}

BlockCode complement_block(BlockCode code) {
    const unsigned len = block_length(code);
    const BlockCode mask = (BlockCode{1} << len) - 1;
    return code ^ mask;
}

BlockCode reverse_block(BlockCode code) {
    const unsigned len = block_length(code);
    BlockCode out = 1;
    for (unsigned i = 0; i < len; ++i) out = (out << 1) | ((code >> i) & 1u);
    return out;
}

std::uint64_t MachineClass::machine_count() const {
    validate();
    std::uint64_t n = 1;
    for (int i = 0; i < 2 * states; ++i) n *= action_count();
    return n;
}

void MachineClass::validate() const {
    if (states < 1) throw InvalidArgument("machine class needs at least one state");
    if (states > kMaxSupportedStates) {
        throw Unsupported("enumeration of " + std::to_string(states) +
                          "-state machines is unsupported (maximum " + std::to_string(kMaxSupportedStates) +
                          ")");
    }
    if (step_budget == 0) throw InvalidArgument("step budget must be positive");
}

std::uint64_t busy_beaver_steps(int states) {
    switch (states) {
        case 1: return 1;
        case 2: return 6;
        case 3: return 21;
        default: throw Unsupported("no busy beaver bound recorded for " + std::to_string(states) + " states");
    }
}

namespace {

struct Action {
    std::uint8_t write;
    std::int8_t move;
    std::int8_t next;  // -1 halts
};

Action decode_action(std::uint64_t code, int states) {
    const auto halt_base = static_cast<std::uint64_t>(4 * states);
    if (code >= halt_base) return {static_cast<std::uint8_t>(code - halt_base), 0, -1};
    return {static_cast<std::uint8_t>(code % 2), static_cast<std::int8_t>((code / 2) % 2 ? 1 : -1),
            static_cast<std::int8_t>(code / 4)};
}

// Reusable simulator state; the tape is sized for the step budget so the head
// never leaves it.
class Simulator {
public:
    explicit Simulator(const MachineClass& cls)
        : cls_(cls), tape_(2 * cls.step_budget + 3, 0), origin_(cls.step_budget + 1) {}

    // Runs the machine described by `rules` (2*states entries). On halt,
    // [lo, hi] is the visited segment.
    bool run(std::span<const Action> rules, std::uint64_t& steps, std::size_t& lo, std::size_t& hi) {
        std::size_t pos = origin_;
        lo = hi = pos;
        int state = 0;
        steps = 0;
        bool halted = false;
        while (steps < cls_.step_budget) {
            const Action& a = rules[static_cast<std::size_t>(2 * state + tape_[pos])];
            ++steps;
            tape_[pos] = a.write;
            if (a.next < 0) {
                halted = true;
                break;
            }
            pos = a.move > 0 ? pos + 1 : pos - 1;
            state = a.next;
            lo = std::min(lo, pos);
            hi = std::max(hi, pos);
        }
        return halted;
    }

    BitString segment(std::size_t lo, std::size_t hi) const {
        return BitString(std::vector<Bit>(tape_.begin() + static_cast<std::ptrdiff_t>(lo),
                                          tape_.begin() + static_cast<std::ptrdiff_t>(hi + 1)));
    }

    BlockCode segment_code(std::size_t lo, std::size_t hi) const {
        if (hi - lo + 1 > kMaxBlockBits) {
            throw Unsupported("halting output longer than " + std::to_string(kMaxBlockBits) + " bits");
        }
        BlockCode code = 1;
        for (std::size_t i = lo; i <= hi; ++i) code = (code << 1) | tape_[i];
        return code;
    }

    void clear(std::size_t lo, std::size_t hi) {
        std::fill(tape_.begin() + static_cast<std::ptrdiff_t>(lo), tape_.begin() + static_cast<std::ptrdiff_t>(hi + 1),
                  Bit{0});
    }

private:
    MachineClass cls_;
    std::vector<Bit> tape_;
    std::size_t origin_;
};

}  // namespace

RunResult run_machine(const MachineClass& cls, std::uint64_t index) {
    if (index >= cls.machine_count()) {
        throw InvalidArgument("machine index " + std::to_string(index) + " out of range");
    }
    std::vector<Action> rules;
    std::uint64_t rest = index;
    for (int j = 0; j < 2 * cls.states; ++j) {
        rules.push_back(decode_action(rest % cls.action_count(), cls.states));
        rest /= cls.action_count();
    }
    Simulator sim(cls);
    RunResult result;
    std::size_t lo = 0, hi = 0;
    result.halted = sim.run(rules, result.steps, lo, hi);
    if (result.halted) result.output = sim.segment(lo, hi);
    return result;
}

ShardCounts enumerate_shard(const MachineClass& cls, MachineRange range, int shard_id) {
    const std::uint64_t total = cls.machine_count();
    if (range.begin > range.end || range.end > total) {
        throw InvalidArgument("machine range [" + std::to_string(range.begin) + ", " + std::to_string(range.end) +
                              ") is outside [0, " + std::to_string(total) + ")");
    }
    ShardCounts out;
    out.shard_id = shard_id;
    out.machine_class = cls;
    out.range = range;
    if (range.size() == 0) return out;

    const std::uint64_t base = cls.action_count();
    const auto nrules = static_cast<std::size_t>(2 * cls.states);
    const std::uint64_t halt_base = 4 * static_cast<std::uint64_t>(cls.states);

    std::vector<Action> table(base);
    for (std::uint64_t a = 0; a < base; ++a) table[a] = decode_action(a, cls.states);

    // Odometer over the base-`base` digits of the machine index.
    std::vector<std::uint64_t> digits(nrules);
    std::uint64_t rest = range.begin;
    for (auto& d : digits) {
        d = rest % base;
        rest /= base;
    }
    std::vector<Action> rules(nrules);
    for (std::size_t j = 0; j < nrules; ++j) rules[j] = table[digits[j]];

    std::unordered_map<BlockCode, std::uint64_t> counts;
    Simulator sim(cls);
    for (std::uint64_t index = range.begin; index < range.end; ++index) {
        bool has_halt = false;
        for (auto d : digits) has_halt |= d >= halt_base;
        // Without a halting rule the machine cannot halt; it still counts as run.
        if (has_halt) {
            std::uint64_t steps = 0;
            std::size_t lo = 0, hi = 0;
            const bool halted = sim.run(rules, steps, lo, hi);
            if (halted) {
                ++counts[sim.segment_code(lo, hi)];
                ++out.halted_total;
            }
            sim.clear(lo, hi);
        }
        ++out.ran_total;

        for (std::size_t j = 0; j < nrules; ++j) {
            if (++digits[j] < base) {
                rules[j] = table[digits[j]];
                break;
            }
            digits[j] = 0;
            rules[j] = table[0];
        }
    }
    out.output_counts.insert(counts.begin(), counts.end());
    return out;
}

std::vector<ShardCounts> enumerate_all(const MachineClass& cls, int shards, int jobs) {
    if (shards < 1) throw InvalidArgument("shard count must be positive");
    const std::uint64_t total = cls.machine_count();
    std::vector<MachineRange> ranges;
    for (int s = 0; s < shards; ++s) {
        ranges.push_back({total * static_cast<std::uint64_t>(s) / static_cast<std::uint64_t>(shards),
                          total * static_cast<std::uint64_t>(s + 1) / static_cast<std::uint64_t>(shards)});
    }
    std::vector<ShardCounts> out(ranges.size());
    const int workers = std::clamp(jobs, 1, shards);
    if (workers == 1) {
        for (int s = 0; s < shards; ++s) out[s] = enumerate_shard(cls, ranges[s], s);
        return out;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (int s = w; s < shards; s += workers) out[s] = enumerate_shard(cls, ranges[s], s);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

CtmTable merge_shards(std::span<const ShardCounts> shards) {
    if (shards.empty()) throw InvalidArgument("cannot merge an empty shard list: machine class unknown");
    const MachineClass cls = shards.front().machine_class;
    std::vector<MachineRange> ranges;
    for (const auto& s : shards) {
        if (!(s.machine_class == cls)) throw InvalidArgument("shards come from different machine classes");
        if (s.range.size() > 0) ranges.push_back(s.range);
    }
    std::sort(ranges.begin(), ranges.end(), [](auto& a, auto& b) { return a.begin < b.begin; });
    for (std::size_t i = 1; i < ranges.size(); ++i) {
        if (ranges[i].begin < ranges[i - 1].end) {
            throw InvalidArgument("shard ranges overlap at machine " + std::to_string(ranges[i].begin));
        }
    }
    std::map<BlockCode, std::uint64_t> counts;
    std::uint64_t halted = 0, ran = 0;
    for (const auto& s : shards) {
        for (const auto& [code, n] : s.output_counts) counts[code] += n;
        halted += s.halted_total;
        ran += s.ran_total;
    }
    return CtmTable(cls, std::move(counts), halted, ran);
}

CtmTable::CtmTable(MachineClass cls, std::map<BlockCode, std::uint64_t> counts, std::uint64_t halted_total,
                   std::uint64_t ran_total)
    : class_(cls), counts_(std::move(counts)), halted_total_(halted_total), ran_total_(ran_total) {
    class_.validate();
    std::uint64_t sum = 0;
    for (const auto& [code, n] : counts_) {
        if (code < 2) throw InvalidArgument("invalid block code in counts");
        if (n == 0) throw InvalidArgument("zero count for block " + decode_block(code).to_string());
        sum += n;
    }
    if (sum != halted_total_) throw InvalidArgument("block counts do not sum to halted_total");
    if (halted_total_ > ran_total_) throw InvalidArgument("halted_total exceeds ran_total");

    const auto count_of = [this](BlockCode c) -> std::uint64_t {
        const auto it = counts_.find(c);
        return it == counts_.end() ? 0 : it->second;
    };
    const double denom = 2.0 * static_cast<double>(halted_total_);
    for (const auto& [code, n] : counts_) {
        if (entries_.contains(code)) continue;
        const BlockCode comp = complement_block(code);
        const double k = -std::log2(static_cast<double>(n + count_of(comp)) / denom);
        entries_[code] = k;
        entries_[comp] = k;
    }

    for (const auto& [code, k] : entries_) {
        const unsigned len = block_length(code);
        if (len >= max_k_by_len_.size()) {
            max_k_by_len_.resize(len + 1, -1.0);
            covered_by_len_.resize(len + 1, 0);
        }
        max_k_by_len_[len] = std::max(max_k_by_len_[len], k);
        ++covered_by_len_[len];
        max_len_ = std::max(max_len_, len);
    }
    complete_len_ = 0;
    for (unsigned len = 1; len < covered_by_len_.size() && len < 64; ++len) {
        if (covered_by_len_[len] != (std::size_t{1} << len)) break;
        complete_len_ = len;
    }

    dense_k_.assign(std::size_t{1} << (kDenseBits + 1), 0.0);
    dense_fallback_.assign(dense_k_.size(), 1);
    for (unsigned len = 1; len <= kDenseBits; ++len) {
        const Value fb = fallback_for(len);
        for (BlockCode code = BlockCode{1} << len; code < (BlockCode{2} << len); ++code) {
            dense_k_[code] = fb.k_bits;
        }
    }
    for (const auto& [code, k] : entries_) {
        if (block_length(code) <= kDenseBits) {
            dense_k_[code] = k;
            dense_fallback_[code] = 0;
        }
    }
}

std::size_t CtmTable::covered_count(unsigned length) const {
    return length < covered_by_len_.size() ? covered_by_len_[length] : 0;
}

CtmTable::Value CtmTable::fallback_for(unsigned length) const {
    if (length < max_k_by_len_.size() && max_k_by_len_[length] >= 0.0) {
        return {max_k_by_len_[length] + 1.0, true};
    }
    return {static_cast<double>(length) + 1.0, true};
}

CtmTable::Value CtmTable::value(BlockCode code) const {
    if (code < 2) throw InvalidArgument("ctm value of an empty block");
    if (code < dense_k_.size()) return {dense_k_[code], dense_fallback_[code] != 0};
    const auto it = entries_.find(code);
    if (it != entries_.end()) return {it->second, false};
    return fallback_for(block_length(code));
}

CtmTable::Value CtmTable::value(const BitString& block) const {
    if (block.empty()) throw InvalidArgument("ctm value of an empty block");
    return value(encode_block(block));
}

double ctm_value(const CtmTable& table, const BitString& block) { return table.value(block).k_bits; }

// File layout (text, one record per line):
//   dimdecon-ctm 1
//   states <n>
//   symbols 2
//   step_budget <s>
//   halted_total <h>
//   ran_total <r>
//   records <k>
//   <block bits> <count>      (k lines, sorted by length then lexicographically)
void CtmTable::save(std::ostream& out) const {
    out << "dimdecon-ctm 1\n"
        << "states " << class_.states << "\n"
        << "symbols 2\n"
        << "step_budget " << class_.step_budget << "\n"
        << "halted_total " << halted_total_ << "\n"
        << "ran_total " << ran_total_ << "\n"
        << "records " << counts_.size() << "\n";
    for (const auto& [code, n] : counts_) out << decode_block(code).to_string() << ' ' << n << '\n';
}

void CtmTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    save(out);
    if (!out) throw Error("failed writing " + path.string());
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Returns false at end of input.
    bool next(std::string& line) {
        line_start_ = offset_;
        if (!std::getline(in_, line)) return false;
        offset_ += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::size_t line_start() const { return line_start_; }

private:
    std::istream& in_;
    std::size_t offset_ = 0;
    std::size_t line_start_ = 0;
};

std::uint64_t parse_u64(const std::string& s, std::size_t offset) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("expected unsigned integer, got '" + s + "'", offset);
    }
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw ParseError("integer out of range: '" + s + "'", offset);
    }
}

std::uint64_t header_field(LineReader& reader, const std::string& key) {
    std::string line;
    if (!reader.next(line)) throw ParseError("missing header field '" + key + "'", reader.line_start());
    std::istringstream ss(line);
    std::string name, value, extra;
    ss >> name >> value;
    if (name != key || value.empty() || (ss >> extra)) {
        throw ParseError("expected '" + key + " <value>', got '" + line + "'", reader.line_start());
    }
    return parse_u64(value, reader.line_start() + key.size() + 1);
}

}  // namespace

CtmTable CtmTable::load(std::istream& in) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line) || line != "dimdecon-ctm 1") {
        throw ParseError("not a dimdecon CTM table (bad magic/version line)", 0);
    }
    MachineClass cls;
    const auto states = header_field(reader, "states");
    if (states == 0 || states > 64) throw ParseError("bad state count", reader.line_start());
    cls.states = static_cast<int>(states);
    if (header_field(reader, "symbols") != 2) throw ParseError("only 2-symbol tables are supported", reader.line_start());
    cls.step_budget = header_field(reader, "step_budget");
    const auto halted = header_field(reader, "halted_total");
    const auto ran = header_field(reader, "ran_total");
    const auto records = header_field(reader, "records");

    std::map<BlockCode, std::uint64_t> counts;
    BlockCode previous = 0;
    for (std::uint64_t i = 0; i < records; ++i) {
        if (!reader.next(line)) throw ParseError("truncated table: expected " + std::to_string(records) + " records", reader.line_start());
        const auto space = line.find(' ');
        if (space == std::string::npos || space == 0) throw ParseError("malformed record '" + line + "'", reader.line_start());
        BitString block;
        try {
            block = BitString::parse(line.substr(0, space));
        } catch (const ParseError& e) {
            throw ParseError("malformed block in record", reader.line_start() + e.offset());
        }
        if (block.size() > kMaxBlockBits) throw ParseError("block too long", reader.line_start());
        const BlockCode code = encode_block(block);
        if (code <= previous) throw ParseError("records not strictly sorted", reader.line_start());
        previous = code;
        counts[code] = parse_u64(line.substr(space + 1), reader.line_start() + space + 1);
    }
    while (reader.next(line)) {
        if (!line.empty()) throw ParseError("trailing data after records", reader.line_start());
    }
    try {
        return CtmTable(cls, std::move(counts), halted, ran);
    } catch (const Unsupported&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("inconsistent table: ") + e.what(), 0);
    }
}

CtmTable CtmTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open table file " + path.string());
    return load(in);
}

}  // namespace dimdecon
