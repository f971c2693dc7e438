#include "dimdecon/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "dimdecon/codec.hpp"
#include "dimdecon/ctm.hpp"
#include "dimdecon/error.hpp"
#include "dimdecon/measures.hpp"
#include "dimdecon/partition.hpp"
#include "dimdecon/perturb.hpp"
#include "dimdecon/svg.hpp"

namespace dimdecon {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Input {
    BitString bits;
    std::optional<Dims> dims;  // known layout (PBM input)
};

bool has_ext(const std::string& path, const char* ext) {
    return fs::path(path).extension() == ext;
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// PBM files by extension, raw text through a binarizer when one is given,
// otherwise a '0'/'1' text stream.
Input load_input(const std::string& path, const std::string& binarize) {
    Input in;
    if (!binarize.empty()) {
        in.bits = binarize_text(slurp(path), parse_binarization(binarize));
    } else if (has_ext(path, ".pbm")) {
        Grid g = read_pbm(fs::path(path));
        in.dims = g.dims();
        in.bits = g.flatten();
    } else {
        std::istringstream ss(slurp(path));
        in.bits = read_bits(ss);
    }
    return in;
}

Grid as_grid(const Input& in, const std::string& dims_flag) {
    if (!dims_flag.empty()) {
        const Dims d = parse_dims(dims_flag);
        return reshape(in.bits, make_candidate(in.bits.size(), d));
    }
    if (in.dims) return Grid(*in.dims, std::vector<Bit>(in.bits.bits().begin(), in.bits.bits().end()));
    return Grid({in.bits.size()}, std::vector<Bit>(in.bits.bits().begin(), in.bits.bits().end()));
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("bad number '" + s + "'");
    }
    if (used != s.size()) throw InvalidArgument("bad number '" + s + "'");
    return v;
}

std::size_t parse_size(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw InvalidArgument("expected a non-negative integer, got '" + s + "'");
    }
    return std::stoull(s);
}

// "1:100" (inclusive), "1:100:5", or "1,2,5,10".
std::vector<std::size_t> parse_schedule(const std::string& text) {
    std::vector<std::size_t> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() < 2 || parts.size() > 3) throw InvalidArgument("schedule range must be A:B or A:B:STEP");
        const std::size_t a = parse_size(parts[0]), b = parse_size(parts[1]);
        const std::size_t step = parts.size() == 3 ? parse_size(parts[2]) : 1;
        if (step == 0 || b < a) throw InvalidArgument("empty schedule range '" + text + "'");
        for (std::size_t m = a; m <= b; m += step) out.push_back(m);
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_size(p));
    }
    if (out.empty()) throw InvalidArgument("empty schedule");
    return out;
}

std::vector<std::size_t> parse_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_size(p));
    return out;
}

std::optional<CtmTable> load_table(const std::string& path, Measure m) {
    if (path.empty()) {
        if (m == Measure::BDM) throw InvalidArgument("--table is required for the bdm measure");
        return std::nullopt;
    }
    return CtmTable::load(fs::path(path));
}

std::optional<Dims> block_option(const std::string& shape, std::size_t block_len) {
    if (!shape.empty() && block_len) throw InvalidArgument("give either --block-shape or --block-len, not both");
    if (!shape.empty()) return parse_dims(shape);
    if (block_len) return Dims{block_len};
    return std::nullopt;
}

template <typename F>
void with_output(const std::string& path, std::ostream& fallback, F&& write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    write(f);
    if (!f) throw Error("failed writing " + path);
}

json score_json(const ComplexityScore& s) {
    json j;
    j["measure"] = measure_name(s.measure);
    j["value"] = s.value;
    if (s.fallback_fraction) j["fallback_fraction"] = *s.fallback_fraction;
    j["blocks"] = s.blocks;
    j["dropped_bits"] = s.dropped_bits;
    if (s.measure == Measure::CompressLen) j["pad_bits"] = s.pad_bits;
    j["warning"] = s.warning;
    return j;
}

void write_sweep_csv(const ScoreSeries& series, std::ostream& out) {
    out << "leading_dim,dims,remainder,measure,score,fallback_fraction,normalized\n";
    for (const auto& p : series.points) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out << p.candidate.leading() << ',' << format_dims(p.candidate.dims) << ',' << p.candidate.remainder_bits
            << ',' << measure_name(series.measure) << ',' << (p.flagged ? "nan" : fmt(p.score.value)) << ','
            << (p.flagged || !p.score.fallback_fraction ? "nan" : fmt(*p.score.fallback_fraction)) << ','
            << (p.flagged ? fmt(nan) : fmt(p.value)) << '\n';
    }
}

ScoreSeries read_sweep_csv(std::istream& in) {
    ScoreSeries series;
    std::string line;
    std::size_t offset = 0;
    if (!std::getline(in, line)) throw ParseError("empty sweep CSV", 0);
    if (line.rfind("leading_dim,dims,remainder,measure,score", 0) != 0) {
        throw ParseError("not a dimdecon sweep CSV (unexpected header)", 0);
    }
    offset += line.size() + 1;
    bool measure_set = false;
    while (std::getline(in, line)) {
        const std::size_t at = offset;
        offset += line.size() + 1;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        if (cols.size() < 6) throw ParseError("sweep CSV row has too few columns", at);
        SweepPoint p;
        try {
            p.candidate.dims = parse_dims(cols[1]);
            p.candidate.covered_bits = product(p.candidate.dims);
            p.candidate.remainder_bits = parse_size(cols[2]);
            const Measure m = parse_measure(cols[3]);
            if (!measure_set) series.measure = m;
            measure_set = true;
            p.score.measure = m;
            p.score.value = parse_double(cols[4]);
            // The normalized column is optional; without it spikes use the raw score.
            p.value = cols.size() > 6 ? parse_double(cols[6]) : p.score.value;
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what(), at);
        }
        p.flagged = std::isnan(p.value);
        series.points.push_back(std::move(p));
    }
    return series;
}

json spikes_json(const SpikeReport& r, std::size_t limit) {
    json j;
    j["method"] = r.method;
    j["window"] = r.window;
    j["spikes"] = json::array();
    for (std::size_t i = 0; i < r.ranked.size() && i < limit; ++i) {
        const auto& s = r.ranked[i];
        j["spikes"].push_back({{"rank", i + 1},
                               {"leading_dim", s.candidate.leading()},
                               {"dims", format_dims(s.candidate.dims)},
                               {"depth", s.depth},
                               {"score", s.score}});
    }
    return j;
}

void write_spikes_csv(const SpikeReport& r, std::ostream& out) {
    out << "rank,leading_dim,dims,depth,score\n";
    for (std::size_t i = 0; i < r.ranked.size(); ++i) {
        const auto& s = r.ranked[i];
        out << i + 1 << ',' << s.candidate.leading() << ',' << format_dims(s.candidate.dims) << ',' << fmt(s.depth)
            << ',' << fmt(s.score) << '\n';
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"dimdecon: recover the dimensions a bit stream was laid out in", "dimdecon"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    int jobs = 1;
    // table
    auto* table = app.add_subcommand("table", "Build or inspect CTM tables");
    table->require_subcommand(1);
    int states = 3;
    std::uint64_t step_budget = 200;
    int shards = 0;
    std::string table_out;
    auto* build = table->add_subcommand("build", "Enumerate a machine class into a table file");
    build->add_option("--states", states, "Working states (1-3)")->capture_default_str();
    build->add_option("--step-budget", step_budget, "Steps before a machine counts as non-halting")
        ->capture_default_str();
    build->add_option("--shards", shards, "Number of enumeration shards (default: --jobs)");
    build->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    build->add_option("--out", table_out, "Output table file")->required();
    std::string inspect_path;
    bool inspect_json = false;
    auto* inspect = table->add_subcommand("inspect", "Summarize a table file");
    inspect->add_option("table", inspect_path, "Table file")->required();
    inspect->add_flag("--json", inspect_json, "Print JSON");

    // shared measure flags
    std::string measure = "bdm", table_path, block_shape, dims_flag, binarize, input;
    std::size_t block_len = 0;
    const auto measure_flags = [&](CLI::App* sub) {
        sub->add_option("--measure", measure, "entropy, compress or bdm")->capture_default_str();
        sub->add_option("--table", table_path, "CTM table file (bdm)");
        sub->add_option("--block-shape", block_shape, "Block shape such as 2x4");
        sub->add_option("--block-len", block_len, "Block length for 1D strings");
        sub->add_option("--binarize", binarize, "Treat INPUT as text: vowel, space or ascii8");
    };

    auto* score_cmd = app.add_subcommand("score", "Score one input as a string or grid");
    measure_flags(score_cmd);
    score_cmd->add_option("--dims", dims_flag, "Lay the stream out as WxH or WxHxD first");
    score_cmd->add_option("input", input, "Input file (.bits, .pbm, or text with --binarize)")->required();

    // sweep
    std::size_t ndim = 2, lead_min = 1, lead_max = 0, window = kDefaultSpikeWindow, top = 10;
    std::string mode = "full", trailing, csv_path, svg_path;
    double z = kDefaultSpikeThreshold, max_remainder = 0.25;
    bool want_json = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "Score every candidate layout of a stream");
    measure_flags(sweep_cmd);
    sweep_cmd->add_option("--ndim", ndim, "2 or 3")->capture_default_str();
    sweep_cmd->add_option("--mode", mode, "full or divisors")->capture_default_str();
    sweep_cmd->add_option("--lead-min", lead_min, "Smallest leading dimension")->capture_default_str();
    sweep_cmd->add_option("--lead-max", lead_max, "Largest leading dimension (0: no limit)");
    sweep_cmd->add_option("--trailing", trailing, "3D: comma-separated second dimensions");
    sweep_cmd->add_option("--max-remainder", max_remainder, "Full mode: largest discarded fraction")
        ->capture_default_str();
    sweep_cmd->add_option("--window", window, "Spike window (odd)")->capture_default_str();
    sweep_cmd->add_option("--z", z, "Spike depth threshold")->capture_default_str();
    sweep_cmd->add_option("--csv", csv_path, "Write the series as CSV (default: stdout)");
    sweep_cmd->add_option("--svg", svg_path, "Write an SVG plot");
    sweep_cmd->add_option("--top", top, "Spikes listed with --json")->capture_default_str();
    sweep_cmd->add_flag("--json", want_json, "Print ranked spikes as JSON on stdout");
    sweep_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("input", input, "Input stream")->required();

    // spikes
    auto* spikes_cmd = app.add_subcommand("spikes", "Rank downward spikes in a sweep CSV");
    spikes_cmd->add_option("--window", window, "Spike window (odd)")->capture_default_str();
    spikes_cmd->add_option("--z", z, "Spike depth threshold")->capture_default_str();
    spikes_cmd->add_option("--top", top, "Spikes listed with --json")->capture_default_str();
    spikes_cmd->add_flag("--json", want_json, "Print JSON instead of CSV");
    spikes_cmd->add_option("--svg", svg_path, "Write an SVG plot");
    spikes_cmd->add_option("csv", input, "Sweep CSV written by 'dimdecon sweep'")->required();

    // perturb
    std::string kind = "flip", factors, out_path;
    std::optional<std::size_t> count, segment_len;
    std::optional<double> rate;
    std::optional<std::uint64_t> seed;
    auto* perturb_cmd = app.add_subcommand("perturb", "Apply one perturbation and write the result");
    perturb_cmd->add_option("--kind", kind, "flip, scramble, complement or amplify")->capture_default_str();
    perturb_cmd->add_option("--count", count, "flip: number of distinct positions");
    perturb_cmd->add_option("--rate", rate, "flip: fraction of positions");
    perturb_cmd->add_option("--segment-len", segment_len, "scramble: segment length");
    perturb_cmd->add_option("--factors", factors, "amplify: per-axis factors such as 6x6");
    perturb_cmd->add_option("--dims", dims_flag, "Layout of the input stream (amplify)");
    perturb_cmd->add_option("--seed", seed, "Random seed (flip, scramble)");
    perturb_cmd->add_option("--binarize", binarize, "Treat INPUT as text: vowel, space or ascii8");
    perturb_cmd->add_option("--out", out_path, "Output file (.pbm for a 2D bitmap; default: stdout)");
    perturb_cmd->add_option("input", input, "Input stream")->required();

    // curve
    std::string schedule;
    std::size_t trials = 20;
    auto* curve_cmd = app.add_subcommand("curve", "Mean score under increasing perturbation");
    measure_flags(curve_cmd);
    curve_cmd->add_option("--kind", kind, "flip (magnitude = flips) or scramble (magnitude = segment length)")
        ->capture_default_str();
    curve_cmd->add_option("--schedule", schedule, "Magnitudes: A:B, A:B:STEP or a comma list")->required();
    curve_cmd->add_option("--trials", trials, "Trials per magnitude")->capture_default_str();
    curve_cmd->add_option("--seed", seed, "Random seed")->required();
    curve_cmd->add_option("--csv", csv_path, "Write the curve as CSV (default: stdout)");
    curve_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    curve_cmd->add_option("input", input, "Input stream")->required();

    // reconstruct
    std::string out_dir, format = "auto";
    auto* recon_cmd = app.add_subcommand("reconstruct", "Write a layout and its symmetry images");
    recon_cmd->add_option("--dims", dims_flag, "Layout such as 23x73 or 16x16x16")->required();
    recon_cmd->add_option("--out-dir", out_dir, "Directory for the variant files")->required();
    recon_cmd->add_option("--format", format, "pbm, bits or auto (pbm for 2D)")->capture_default_str();
    recon_cmd->add_option("--binarize", binarize, "Treat INPUT as text: vowel, space or ascii8");
    recon_cmd->add_option("input", input, "Input stream")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "dimdecon: " << e.what() << "\n";
        const CLI::App* failing = &app;
        for (auto* sub : app.get_subcommands()) {
            failing = sub;
            for (auto* subsub : sub->get_subcommands()) failing = subsub;
        }
        err << failing->help();
        return 1;
    }

    try {
        if (build->parsed()) {
            MachineClass cls{states, step_budget};
            cls.validate();
            const int nshards = shards > 0 ? shards : jobs;
            auto parts = enumerate_all(cls, nshards, jobs);
            CtmTable t = merge_shards(parts);
            t.save(fs::path(table_out));
            err << "enumerated " << t.ran_total() << " machines, " << t.halted_total() << " halted, "
                << t.counts().size() << " distinct outputs, covered up to length " << t.max_covered_len() << "\n";
            return 0;
        }
        if (inspect->parsed()) {
            const CtmTable t = CtmTable::load(fs::path(inspect_path));
            json j;
            j["states"] = t.machine_class().states;
            j["symbols"] = 2;
            j["step_budget"] = t.machine_class().step_budget;
            j["ran_total"] = t.ran_total();
            j["halted_total"] = t.halted_total();
            j["records"] = t.counts().size();
            j["max_covered_len"] = t.max_covered_len();
            j["complete_len"] = t.complete_len();
            json cov = json::array();
            for (unsigned len = 1; len <= t.max_covered_len(); ++len) {
                cov.push_back({{"length", len}, {"covered", t.covered_count(len)},
                               {"possible", std::uint64_t{1} << len}});
            }
            j["coverage"] = cov;
            if (inspect_json) {
                out << j.dump(2) << "\n";
            } else {
                out << "states " << t.machine_class().states << "\nstep_budget " << t.machine_class().step_budget
                    << "\nran_total " << t.ran_total() << "\nhalted_total " << t.halted_total() << "\nrecords "
                    << t.counts().size() << "\nmax_covered_len " << t.max_covered_len() << "\ncomplete_len "
                    << t.complete_len() << "\n";
                for (unsigned len = 1; len <= t.max_covered_len(); ++len) {
                    out << "length " << len << ": " << t.covered_count(len) << "/" << (std::uint64_t{1} << len)
                        << " covered\n";
                }
            }
            return 0;
        }
        if (score_cmd->parsed()) {
            MeasureConfig cfg;
            cfg.measure = parse_measure(measure);
            auto t = load_table(table_path, cfg.measure);
            cfg.table = t ? &*t : nullptr;
            cfg.block_shape = block_option(block_shape, block_len);
            const Input in = load_input(input, binarize);
            const Grid g = as_grid(in, dims_flag);
            const ComplexityScore s = score(g, cfg);
            json j = score_json(s);
            j["dims"] = format_dims(g.dims());
            j["block_shape"] = format_dims(cfg.block_shape ? *cfg.block_shape : default_block_shape(g.ndim(), cfg.measure));
            j["bits"] = g.size();
            out << j.dump() << "\n";
            return 0;
        }
        if (sweep_cmd->parsed()) {
            SweepOptions o;
            o.ndim = ndim;
            o.mode = parse_partition_mode(mode);
            o.measure.measure = parse_measure(measure);
            auto t = load_table(table_path, o.measure.measure);
            o.measure.table = t ? &*t : nullptr;
            o.measure.block_shape = block_option(block_shape, block_len);
            o.lead_min = lead_min;
            o.lead_max = lead_max;
            if (!trailing.empty()) o.trailing = parse_list(trailing);
            o.max_remainder_fraction = max_remainder;
            o.jobs = jobs;
            const Input in = load_input(input, binarize);
            const ScoreSeries series = sweep(in.bits, o);
            if (series.truncated) err << "warning: candidate list truncated at " << o.cap << "\n";
            std::size_t flagged = 0;
            for (const auto& p : series.points) flagged += p.flagged;
            err << series.points.size() << " layouts scored, " << flagged << " flagged, " << series.skipped.size()
                << " skipped for discarding too many bits\n";
            if (!want_json || !csv_path.empty()) {
                with_output(csv_path, out, [&](std::ostream& o2) { write_sweep_csv(series, o2); });
            }
            std::optional<SpikeReport> report;
            if (want_json || !svg_path.empty()) report = detect_spikes(series, window, z);
            if (!svg_path.empty()) {
                with_output(svg_path, out, [&](std::ostream& o2) {
                    write_sweep_svg(series, *report, o2, std::string(measure_name(series.measure)) + " sweep of " +
                                                             fs::path(input).filename().string());
                });
            }
            if (want_json) out << spikes_json(*report, top).dump(2) << "\n";
            return 0;
        }
        if (spikes_cmd->parsed()) {
            std::ifstream f(input, std::ios::binary);
            if (!f) throw Error("cannot open " + input);
            const ScoreSeries series = read_sweep_csv(f);
            const SpikeReport report = detect_spikes(series, window, z);
            if (!svg_path.empty()) {
                with_output(svg_path, out, [&](std::ostream& o2) { write_sweep_svg(series, report, o2); });
            }
            if (want_json) {
                out << spikes_json(report, top).dump(2) << "\n";
            } else {
                write_spikes_csv(report, out);
            }
            return 0;
        }
        if (perturb_cmd->parsed()) {
            PerturbationSpec spec;
            spec.kind = parse_perturbation_kind(kind);
            spec.rate = rate;
            spec.count = count;
            if (segment_len) spec.segment_len = *segment_len;
            if (!factors.empty()) spec.factors = parse_dims(factors);
            const bool stochastic =
                spec.kind == PerturbationKind::FlipRandom || spec.kind == PerturbationKind::ScrambleSegments;
            if (stochastic && !seed) throw InvalidArgument("--seed is required for " + kind);
            spec.seed = seed.value_or(0);
            spec.validate();
            const Input in = load_input(input, binarize);
            if (spec.kind == PerturbationKind::Amplify && dims_flag.empty() && !in.dims) {
                throw InvalidArgument("amplify needs --dims or a PBM input");
            }
            const Grid result = apply(as_grid(in, dims_flag), spec);
            if (!out_path.empty() && has_ext(out_path, ".pbm")) {
                if (result.ndim() != 2) throw InvalidArgument("PBM output needs a 2D layout (give --dims)");
                write_pbm(result, fs::path(out_path));
            } else {
                const std::size_t line = result.ndim() > 1 ? result.width() : 0;
                with_output(out_path, out, [&](std::ostream& o2) { write_bits(result.flatten(), o2, line); });
            }
            return 0;
        }
        if (curve_cmd->parsed()) {
            MeasureConfig cfg;
            cfg.measure = parse_measure(measure);
            auto t = load_table(table_path, cfg.measure);
            cfg.table = t ? &*t : nullptr;
            cfg.block_shape = block_option(block_shape, block_len);
            const Input in = load_input(input, binarize);
            const auto sched = parse_schedule(schedule);
            const PerturbationCurve c =
                perturbation_curve(in.bits, sched, parse_perturbation_kind(kind), cfg, trials, *seed, jobs);
            with_output(csv_path, out, [&](std::ostream& o2) {
                o2 << "magnitude,mean,stddev,trials,base_score,measure\n";
                for (const auto& s : c.steps) {
                    o2 << fmt(s.magnitude) << ',' << fmt(s.mean) << ',' << fmt(s.stddev) << ',' << s.trials << ','
                       << fmt(c.base_score) << ',' << measure_name(c.measure) << '\n';
                }
            });
            return 0;
        }
        if (recon_cmd->parsed()) {
            const Input in = load_input(input, binarize);
            const PartitionCandidate cand = make_candidate(in.bits.size(), parse_dims(dims_flag));
            const auto variants = reconstruct(in.bits, cand);
            fs::create_directories(out_dir);
            json j;
            j["dims"] = format_dims(cand.dims);
            j["remainder"] = cand.remainder_bits;
            j["variants"] = json::array();
            for (const auto& v : variants) {
                const bool pbm = format == "pbm" || (format == "auto" && v.grid.ndim() == 2);
                if (format != "pbm" && format != "bits" && format != "auto") {
                    throw InvalidArgument("unknown format '" + format + "' (expected pbm, bits or auto)");
                }
                const fs::path p = fs::path(out_dir) / (v.tag + (pbm ? ".pbm" : ".bits"));
                if (pbm) {
                    write_pbm(v.grid, p);
                } else {
                    write_bits(v.grid.flatten(), p, v.grid.width());
                }
                j["variants"].push_back({{"tag", v.tag}, {"dims", format_dims(v.grid.dims())}, {"path", p.string()}});
            }
            out << j.dump(2) << "\n";
            return 0;
        }
    } catch (const Unsupported& e) {
        err << "dimdecon: unsupported: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "dimdecon: " << e.what() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "dimdecon: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "dimdecon: internal error: " << e.what() << "\n";
        return 2;
    }
    err << "dimdecon: no command given\n" << app.help();
    return 1;
}

}  // namespace dimdecon
