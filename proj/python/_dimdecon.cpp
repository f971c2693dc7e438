#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "dimdecon/codec.hpp"
#include "dimdecon/ctm.hpp"
#include "dimdecon/error.hpp"
#include "dimdecon/measures.hpp"
#include "dimdecon/partition.hpp"
#include "dimdecon/perturb.hpp"

namespace py = pybind11;
using namespace dimdecon;

namespace {

// Bits cross the boundary as "0101" strings; the Python side converts other inputs.
BitString bits_in(const std::string& s) { return BitString::parse(s); }
std::string bits_out(const BitString& b) { return b.to_string(); }

Grid grid_in(const std::string& s, const Dims& dims) {
    const BitString x = bits_in(s);
    return reshape(x, make_candidate(x.size(), dims));
}

MeasureConfig config(const std::string& measure, const CtmTable* table, const std::optional<Dims>& block_shape) {
    MeasureConfig c;
    c.measure = parse_measure(measure);
    c.table = table;
    c.block_shape = block_shape;
    return c;
}

py::dict score_dict(const ComplexityScore& s) {
    py::dict d;
    d["measure"] = std::string(measure_name(s.measure));
    d["value"] = s.value;
    d["fallback_fraction"] = s.fallback_fraction ? py::cast(*s.fallback_fraction) : py::none();
    d["blocks"] = s.blocks;
    d["dropped_bits"] = s.dropped_bits;
    d["pad_bits"] = s.pad_bits;
    d["warning"] = s.warning;
    return d;
}

py::dict candidate_dict(const PartitionCandidate& c) {
    py::dict d;
    d["dims"] = c.dims;
    d["leading"] = c.leading();
    d["covered_bits"] = c.covered_bits;
    d["remainder_bits"] = c.remainder_bits;
    return d;
}

py::list spikes_list(const SpikeReport& r) {
    py::list out;
    for (const auto& s : r.ranked) {
        py::dict d = candidate_dict(s.candidate);
        d["depth"] = s.depth;
        d["score"] = s.score;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_dimdecon, m) {
    m.doc() = "Native core of dimdecon";

    static py::exception<Error> error(m, "DimdeconError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<CtmTable>(m, "CtmTable")
        .def_static("load", [](const std::string& path) { return CtmTable::load(std::filesystem::path(path)); })
        .def_static(
            "build",
            [](int states, std::uint64_t step_budget, int jobs) {
                MachineClass cls{states, step_budget};
                cls.validate();
                py::gil_scoped_release release;
                const auto shards = enumerate_all(cls, jobs, jobs);
                return merge_shards(shards);
            },
            py::arg("states"), py::arg("step_budget"), py::arg("jobs") = 1)
        .def("save", [](const CtmTable& t, const std::string& path) { t.save(std::filesystem::path(path)); })
        .def("value", [](const CtmTable& t, const std::string& block) {
            const auto v = t.value(bits_in(block));
            return py::make_tuple(v.k_bits, v.fallback);
        })
        .def("entries", [](const CtmTable& t) {
            py::dict d;
            for (const auto& [code, k] : t.entries()) d[py::str(decode_block(code).to_string())] = k;
            return d;
        })
        .def_property_readonly("states", [](const CtmTable& t) { return t.machine_class().states; })
        .def_property_readonly("step_budget", [](const CtmTable& t) { return t.machine_class().step_budget; })
        .def_property_readonly("halted_total", &CtmTable::halted_total)
        .def_property_readonly("ran_total", &CtmTable::ran_total)
        .def_property_readonly("max_covered_len", &CtmTable::max_covered_len)
        .def_property_readonly("complete_len", &CtmTable::complete_len);

    m.def("ctm_value", [](const CtmTable& t, const std::string& block) { return ctm_value(t, bits_in(block)); });

    m.def(
        "score",
        [](const std::string& bits, const std::string& measure, std::optional<Dims> dims, std::optional<Dims> block_shape,
           const CtmTable* table) {
            const BitString x = bits_in(bits);
            const MeasureConfig c = config(measure, table, block_shape);
            return score_dict(dims ? score(reshape(x, make_candidate(x.size(), *dims)), c) : score(x, c));
        },
        py::arg("bits"), py::arg("measure") = "bdm", py::arg("dims") = py::none(), py::arg("block_shape") = py::none(),
        py::arg("table") = nullptr);

    m.def("lz_compress", [](const py::bytes& data) {
        const std::string s = data;
        const auto out = lz_compress(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        return py::bytes(reinterpret_cast<const char*>(out.data()), out.size());
    });
    m.def("lz_decompress", [](const py::bytes& data) {
        const std::string s = data;
        const auto out = lz_decompress(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        return py::bytes(reinterpret_cast<const char*>(out.data()), out.size());
    });

    m.def(
        "sweep",
        [](const std::string& bits, const std::string& measure, const CtmTable* table, std::size_t ndim,
           const std::string& mode, std::optional<Dims> block_shape, std::size_t lead_min, std::size_t lead_max,
           std::vector<std::size_t> trailing, double max_remainder, int jobs) {
            SweepOptions o;
            o.ndim = ndim;
            o.mode = parse_partition_mode(mode);
            o.measure = config(measure, table, block_shape);
            o.lead_min = lead_min;
            o.lead_max = lead_max;
            o.trailing = std::move(trailing);
            o.max_remainder_fraction = max_remainder;
            o.jobs = jobs;
            const BitString x = bits_in(bits);
            py::gil_scoped_release release;
            return sweep(x, o);
        },
        py::arg("bits"), py::arg("measure") = "bdm", py::arg("table") = nullptr, py::arg("ndim") = 2,
        py::arg("mode") = "full", py::arg("block_shape") = py::none(), py::arg("lead_min") = 1,
        py::arg("lead_max") = 0, py::arg("trailing") = std::vector<std::size_t>{}, py::arg("max_remainder") = 0.25,
        py::arg("jobs") = 1);

    py::class_<ScoreSeries>(m, "ScoreSeries")
        .def_property_readonly("measure", [](const ScoreSeries& s) { return std::string(measure_name(s.measure)); })
        .def_property_readonly("truncated", [](const ScoreSeries& s) { return s.truncated; })
        .def_property_readonly("skipped", [](const ScoreSeries& s) { return s.skipped.size(); })
        .def("points", [](const ScoreSeries& s) {
            py::list out;
            for (const auto& p : s.points) {
                py::dict d = candidate_dict(p.candidate);
                d["flagged"] = p.flagged;
                d["error"] = p.error;
                d["value"] = p.flagged ? py::none() : py::cast(p.value);
                d["score"] = p.flagged ? py::object(py::none()) : py::object(score_dict(p.score));
                out.append(d);
            }
            return out;
        })
        .def("__len__", [](const ScoreSeries& s) { return s.points.size(); });

    m.def(
        "detect_spikes",
        [](const ScoreSeries& s, std::size_t window, double z) { return spikes_list(detect_spikes(s, window, z)); },
        py::arg("series"), py::arg("window") = kDefaultSpikeWindow, py::arg("z") = kDefaultSpikeThreshold);

    m.def("flip_random", [](const std::string& bits, std::size_t count, std::uint64_t seed) {
        return bits_out(flip_random(bits_in(bits), count, seed));
    });
    m.def("flip_count_for_rate", &flip_count_for_rate);
    m.def("scramble_segments", [](const std::string& bits, std::size_t segment_len, std::uint64_t seed) {
        return bits_out(scramble_segments(bits_in(bits), segment_len, seed));
    });
    m.def("complement", [](const std::string& bits) { return bits_out(complement(bits_in(bits))); });
    m.def("amplify", [](const std::string& bits, const Dims& dims, const Dims& factors) {
        const Grid g = amplify(grid_in(bits, dims), factors);
        return py::make_tuple(g.dims(), bits_out(g.flatten()));
    });
    m.def(
        "perturbation_curve",
        [](const std::string& bits, const std::vector<std::size_t>& schedule, const std::string& kind,
           const std::string& measure, const CtmTable* table, std::optional<Dims> block_shape, std::size_t trials,
           std::uint64_t seed, int jobs) {
            const BitString x = bits_in(bits);
            const MeasureConfig c = config(measure, table, block_shape);
            const auto k = parse_perturbation_kind(kind);
            PerturbationCurve curve;
            {
                py::gil_scoped_release release;
                curve = perturbation_curve(x, schedule, k, c, trials, seed, jobs);
            }
            py::list steps;
            for (const auto& s : curve.steps) {
                py::dict d;
                d["magnitude"] = s.magnitude;
                d["mean"] = s.mean;
                d["stddev"] = s.stddev;
                d["trials"] = s.trials;
                steps.append(d);
            }
            py::dict out;
            out["measure"] = std::string(measure_name(curve.measure));
            out["base_score"] = curve.base_score;
            out["steps"] = steps;
            return out;
        },
        py::arg("bits"), py::arg("schedule"), py::arg("kind") = "flip", py::arg("measure") = "bdm",
        py::arg("table") = nullptr, py::arg("block_shape") = py::none(), py::arg("trials") = 20, py::arg("seed") = 0,
        py::arg("jobs") = 1);

    m.def("reconstruct", [](const std::string& bits, const Dims& dims) {
        const BitString x = bits_in(bits);
        py::list out;
        for (const auto& v : reconstruct(x, make_candidate(x.size(), dims))) {
            out.append(py::make_tuple(v.tag, v.grid.dims(), bits_out(v.grid.flatten())));
        }
        return out;
    });

    m.def("binarize_text", [](const std::string& text, const std::string& scheme) {
        return bits_out(binarize_text(text, parse_binarization(scheme)));
    });
    m.def("read_bits", [](const std::string& path) { return bits_out(read_bits(std::filesystem::path(path))); });
    m.def("read_pbm", [](const std::string& path) {
        const Grid g = read_pbm(std::filesystem::path(path));
        return py::make_tuple(g.dims(), bits_out(g.flatten()));
    });
}
