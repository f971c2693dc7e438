#include "dimdecon/perturb.hpp"

#include <cmath>
#include <numeric>
#include <thread>

#include "dimdecon/error.hpp"
#include "dimdecon/rng.hpp"

namespace dimdecon {

BitString flip_random(const BitString& x, std::size_t count, std::uint64_t seed) {
    if (count > x.size()) {
        throw InvalidArgument("cannot flip " + std::to_string(count) + " distinct bits of a " +
                              std::to_string(x.size()) + "-bit stream");
    }
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(seed);
    BitString out = x;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(x.size() - i));
        std::swap(order[i], order[j]);
        out.flip(order[i]);
    }
    return out;
}

std::size_t flip_count_for_rate(std::size_t length, double rate) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidArgument("flip rate must be in [0, 1]");
    return static_cast<std::size_t>(std::llround(rate * static_cast<double>(length)));
}

BitString scramble_segments(const BitString& x, std::size_t segment_len, std::uint64_t seed) {
    if (segment_len == 0 || segment_len > x.size()) {
        throw InvalidArgument("segment length must be in [1, " + std::to_string(x.size()) + "]");
    }
    const std::size_t segments = x.size() / segment_len;
    std::vector<std::size_t> perm(segments);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SplitMix64 rng(seed);
    for (std::size_t i = segments; i-- > 1;) {
        std::swap(perm[i], perm[static_cast<std::size_t>(rng.below(i + 1))]);
    }
    BitString out(x.size());
    for (std::size_t s = 0; s < segments; ++s) {
        for (std::size_t k = 0; k < segment_len; ++k) out.set(s * segment_len + k, x[perm[s] * segment_len + k]);
    }
    for (std::size_t i = segments * segment_len; i < x.size(); ++i) out.set(i, x[i]);
    return out;
}

BitString complement(const BitString& x) { return x.complemented(); }

Grid complement(const Grid& g) {
    std::vector<Bit> data(g.data().begin(), g.data().end());
    for (auto& b : data) b ^= 1u;
    return Grid(g.dims(), std::move(data));
}

Grid amplify(const Grid& g, const Dims& factors) {
    if (factors.size() != g.ndim()) {
        throw InvalidArgument("amplification factors " + format_dims(factors) + " do not match grid " +
                              format_dims(g.dims()));
    }
    Dims dims(g.ndim());
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (factors[i] == 0) throw InvalidArgument("amplification factors must be at least 1");
        dims[i] = g.dims()[i] * factors[i];
    }
    const std::size_t fx = factors[0];
    const std::size_t fy = factors.size() > 1 ? factors[1] : 1;
    const std::size_t fz = factors.size() > 2 ? factors[2] : 1;
    Grid out(dims);
    for (std::size_t z = 0; z < out.depth(); ++z) {
        for (std::size_t y = 0; y < out.height(); ++y) {
            for (std::size_t x = 0; x < out.width(); ++x) out.set(x, y, z, g.at(x / fx, y / fy, z / fz));
        }
    }
    return out;
}

PerturbationKind parse_perturbation_kind(std::string_view name) {
    if (name == "flip") return PerturbationKind::FlipRandom;
    if (name == "scramble") return PerturbationKind::ScrambleSegments;
    if (name == "complement") return PerturbationKind::Complement;
    if (name == "amplify") return PerturbationKind::Amplify;
    throw InvalidArgument("unknown perturbation kind '" + std::string(name) +
                          "' (expected flip, scramble, complement or amplify)");
}

void PerturbationSpec::validate() const {
    switch (kind) {
        case PerturbationKind::FlipRandom:
            if (rate.has_value() == count.has_value()) {
                throw InvalidArgument("flip perturbations need exactly one of rate or count");
            }
            if (rate && !(*rate >= 0.0 && *rate <= 1.0)) throw InvalidArgument("flip rate must be in [0, 1]");
            break;
        case PerturbationKind::ScrambleSegments:
            if (segment_len == 0) throw InvalidArgument("scrambling needs a positive segment length");
            break;
        case PerturbationKind::Amplify:
            if (factors.empty()) throw InvalidArgument("amplification needs factors");
            for (auto f : factors) {
                if (f == 0) throw InvalidArgument("amplification factors must be at least 1");
            }
            break;
        case PerturbationKind::Complement: break;
    }
}

BitString apply(const BitString& x, const PerturbationSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case PerturbationKind::FlipRandom:
            return flip_random(x, spec.count ? *spec.count : flip_count_for_rate(x.size(), *spec.rate), spec.seed);
        case PerturbationKind::ScrambleSegments: return scramble_segments(x, spec.segment_len, spec.seed);
        case PerturbationKind::Complement: return complement(x);
        case PerturbationKind::Amplify:
            if (spec.factors.size() != 1) throw InvalidArgument("amplifying a stream needs a single factor");
            return amplify(Grid({x.size()}, std::vector<Bit>(x.bits().begin(), x.bits().end())), spec.factors)
                .flatten();
    }
    throw InvalidArgument("unknown perturbation kind");
}

Grid apply(const Grid& g, const PerturbationSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case PerturbationKind::Complement: return complement(g);
        case PerturbationKind::Amplify: return amplify(g, spec.factors);
        default: {
            const BitString out = apply(g.flatten(), spec);
            return Grid(g.dims(), std::vector<Bit>(out.bits().begin(), out.bits().end()));
        }
    }
}

PerturbationCurve perturbation_curve(const BitString& x, std::span<const std::size_t> schedule,
                                     PerturbationKind kind, const MeasureConfig& measure, std::size_t trials,
                                     std::uint64_t seed, int jobs) {
    if (trials == 0) throw InvalidArgument("a perturbation curve needs at least one trial per step");
    if (schedule.empty()) throw InvalidArgument("empty perturbation schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (schedule[i] <= schedule[i - 1]) throw InvalidArgument("perturbation schedule must be strictly increasing");
    }
    if (kind != PerturbationKind::FlipRandom && kind != PerturbationKind::ScrambleSegments) {
        throw InvalidArgument("perturbation curves support flip and scramble");
    }

    PerturbationCurve curve;
    curve.measure = measure.measure;
    curve.base_score = score(x, measure).value;

    std::vector<double> values(schedule.size() * trials);
    const auto run = [&](std::size_t job) {
        const std::size_t step = job / trials, trial = job % trials;
        const std::size_t m = schedule[step];
        const std::uint64_t s = derive_seed(seed, trial);
        BitString y = kind == PerturbationKind::FlipRandom ? flip_random(x, m, s) : scramble_segments(x, m, s);
        values[job] = score(y, measure).value;
    };
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1) {
        for (std::size_t j = 0; j < values.size(); ++j) run(j);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                try {
                    for (std::size_t j = w; j < values.size(); j += workers) run(j);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    for (std::size_t step = 0; step < schedule.size(); ++step) {
        double sum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) sum += values[step * trials + t];
        const double mean = sum / static_cast<double>(trials);
        double ss = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const double d = values[step * trials + t] - mean;
            ss += d * d;
        }
        curve.steps.push_back({static_cast<double>(schedule[step]), mean,
                               std::sqrt(ss / static_cast<double>(trials)), trials});
    }
    return curve;
}

}  // namespace dimdecon
