#include "dimdecon/partition.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "dimdecon/error.hpp"

namespace dimdecon {

PartitionMode parse_partition_mode(std::string_view name) {
    if (name == "divisors") return PartitionMode::Divisors;
    if (name == "full") return PartitionMode::Full;
    throw InvalidArgument("unknown partition mode '" + std::string(name) + "' (expected divisors or full)");
}

PartitionCandidate make_candidate(std::size_t n, Dims dims) {
    for (auto d : dims) {
        if (d == 0) throw InvalidArgument("partition dimensions must be positive");
    }
    const std::size_t covered = product(dims);
    if (covered > n) {
        throw InvalidArgument("partition " + format_dims(dims) + " needs " + std::to_string(covered) +
                              " bits but the stream has " + std::to_string(n));
    }
    return {std::move(dims), covered, n - covered};
}

std::vector<PartitionCandidate> enumerate_2d(std::size_t n, PartitionMode mode) {
    if (n == 0) throw InvalidArgument("stream length must be at least 1");
    std::vector<PartitionCandidate> out;
    for (std::size_t w = 1; w <= n; ++w) {
        if (mode == PartitionMode::Divisors && n % w != 0) continue;
        out.push_back(make_candidate(n, {w, n / w}));
    }
    return out;
}

std::size_t default_trailing_dim(std::size_t n) {
    if (n == 0) throw InvalidArgument("stream length must be at least 1");
    std::size_t best = 1;
    for (std::size_t b = 1; b * b * b <= n; ++b) {
        if (n % b == 0) best = b;
    }
    return best;
}

Enumeration enumerate_3d(std::size_t n, PartitionMode mode, const Enumerate3dOptions& options) {
    if (n == 0) throw InvalidArgument("stream length must be at least 1");
    Enumeration out;
    const auto push = [&](std::size_t a, std::size_t b, std::size_t c) {
        if (out.candidates.size() >= options.cap) {
            out.truncated = true;
            return false;
        }
        out.candidates.push_back(make_candidate(n, {a, b, c}));
        return true;
    };
    if (mode == PartitionMode::Divisors) {
        for (std::size_t a = 1; a <= n; ++a) {
            if (n % a) continue;
            const std::size_t m = n / a;
            for (std::size_t b = 1; b <= m; ++b) {
                if (m % b) continue;
                if (!push(a, b, m / b)) return out;
            }
        }
        return out;
    }
    std::vector<std::size_t> trailing = options.trailing;
    if (trailing.empty()) trailing.push_back(default_trailing_dim(n));
    for (auto b : trailing) {
        if (b == 0) throw InvalidArgument("trailing dimension must be positive");
    }
    const std::size_t lead_min = std::max<std::size_t>(options.lead_min, 1);
    const std::size_t lead_max = options.lead_max ? std::min(options.lead_max, n) : n;
    for (std::size_t a = lead_min; a <= lead_max; ++a) {
        for (auto b : trailing) {
            const std::size_t c = n / (a * b);
            if (c == 0) continue;
            if (!push(a, b, c)) return out;
        }
    }
    return out;
}

Grid reshape(const BitString& x, const PartitionCandidate& c) {
    const std::size_t covered = product(c.dims);
    if (covered > x.size()) {
        throw InvalidArgument("partition " + format_dims(c.dims) + " covers " + std::to_string(covered) +
                              " bits but the stream has " + std::to_string(x.size()));
    }
    const auto bits = x.bits();
    return Grid(c.dims, std::vector<Bit>(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(covered)));
}

ScoreSeries sweep(const BitString& x, const SweepOptions& options) {
    if (x.empty()) throw InvalidArgument("cannot sweep an empty stream");
    if (options.measure.measure == Measure::BDM && !options.measure.table) {
        throw InvalidArgument("BDM sweeps need a CTM table");
    }
    const std::size_t n = x.size();
    std::vector<PartitionCandidate> candidates;
    ScoreSeries series;
    series.measure = options.measure.measure;
    if (options.ndim == 2) {
        candidates = enumerate_2d(n, options.mode);
    } else if (options.ndim == 3) {
        Enumerate3dOptions e;
        e.lead_min = options.lead_min;
        e.lead_max = options.lead_max;
        e.trailing = options.trailing;
        e.cap = options.cap;
        auto en = enumerate_3d(n, options.mode, e);
        candidates = std::move(en.candidates);
        series.truncated = en.truncated;
    } else {
        throw InvalidArgument("sweeps support 2 or 3 dimensions, got " + std::to_string(options.ndim));
    }

    std::vector<PartitionCandidate> kept;
    for (auto& c : candidates) {
        if (c.leading() < options.lead_min || (options.lead_max && c.leading() > options.lead_max)) continue;
        if (options.mode == PartitionMode::Full &&
            static_cast<double>(c.remainder_bits) > options.max_remainder_fraction * static_cast<double>(n)) {
            series.skipped.push_back(std::move(c));
            continue;
        }
        kept.push_back(std::move(c));
    }

    std::vector<SweepPoint> points(kept.size());
    const auto work = [&](std::size_t i) {
        SweepPoint& p = points[i];
        p.candidate = kept[i];
        p.score.measure = options.measure.measure;
        try {
            p.score = score(reshape(x, kept[i]), options.measure);
            const std::size_t scored = kept[i].covered_bits - p.score.dropped_bits;
            if (scored == 0) throw InvalidArgument("layout leaves no bits to score");
            p.value = p.score.value * static_cast<double>(n) / static_cast<double>(scored);
        } catch (const Error& e) {
            p.flagged = true;
            p.error = e.what();
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, options.jobs));
    if (workers == 1 || kept.size() < 2) {
        for (std::size_t i = 0; i < kept.size(); ++i) work(i);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                for (std::size_t i = w; i < kept.size(); i += workers) work(i);
            });
        }
        for (auto& t : threads) t.join();
    }
    // In Full mode the discard limit also counts the bits the block tiling drops.
    for (auto& p : points) {
        const std::size_t discarded = p.candidate.remainder_bits + p.score.dropped_bits;
        if (options.mode == PartitionMode::Full && !p.flagged &&
            static_cast<double>(discarded) > options.max_remainder_fraction * static_cast<double>(n)) {
            series.skipped.push_back(std::move(p.candidate));
            continue;
        }
        series.points.push_back(std::move(p));
    }
    return series;
}

namespace {

double median_of(std::vector<double>& v) {
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    double hi = v[m];
    if (v.size() % 2) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    return 0.5 * (lo + hi);
}

}  // namespace

SpikeReport detect_spikes(const ScoreSeries& series, std::size_t window, double z_threshold) {
    if (window < 3 || window % 2 == 0) throw InvalidArgument("spike window must be odd and at least 3");
    std::vector<const SweepPoint*> pts;
    for (const auto& p : series.points) {
        if (!p.flagged) pts.push_back(&p);
    }
    if (pts.size() < window) {
        throw InvalidArgument("series has " + std::to_string(pts.size()) + " scored points, fewer than the window " +
                              std::to_string(window));
    }
    SpikeReport report;
    report.window = window;
    std::vector<double> buf(window), dev(window);
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::size_t start = std::min(i > half ? i - half : 0, pts.size() - window);
        for (std::size_t k = 0; k < window; ++k) buf[k] = pts[start + k]->value;
        const double med = median_of(buf);
        for (std::size_t k = 0; k < window; ++k) dev[k] = std::abs(pts[start + k]->value - med);
        const double mad = std::max(median_of(dev), kMadFloor);
        const double depth = (med - pts[i]->value) / mad;
        if (depth > 0.0 && depth >= z_threshold) {
            report.ranked.push_back({pts[i]->candidate, depth, pts[i]->value});
        }
    }
    std::stable_sort(report.ranked.begin(), report.ranked.end(),
                     [](const Spike& a, const Spike& b) { return a.depth > b.depth; });
    return report;
}

Grid transpose(const Grid& g) {
    if (g.ndim() != 2) throw InvalidArgument("transpose needs a 2D grid");
    Grid out({g.height(), g.width()});
    for (std::size_t y = 0; y < g.height(); ++y) {
        for (std::size_t x = 0; x < g.width(); ++x) out.set(y, x, 0, g.at(x, y));
    }
    return out;
}

Grid mirror(const Grid& g, std::size_t axis) {
    if (axis >= g.ndim()) throw InvalidArgument("mirror axis out of range");
    Grid out(g.dims());
    for (std::size_t z = 0; z < g.depth(); ++z) {
        for (std::size_t y = 0; y < g.height(); ++y) {
            for (std::size_t x = 0; x < g.width(); ++x) {
                std::size_t c[3] = {x, y, z};
                c[axis] = g.dims()[axis] - 1 - c[axis];
                out.set(c[0], c[1], c[2], g.at(x, y, z));
            }
        }
    }
    return out;
}

Grid permute_axes(const Grid& g, const std::vector<std::size_t>& order) {
    if (order.size() != g.ndim()) throw InvalidArgument("axis order does not match grid rank");
    Dims dims(g.ndim());
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] >= g.ndim()) throw InvalidArgument("axis index out of range");
        dims[i] = g.dims()[order[i]];
    }
    Grid out(dims);
    for (std::size_t z = 0; z < g.depth(); ++z) {
        for (std::size_t y = 0; y < g.height(); ++y) {
            for (std::size_t x = 0; x < g.width(); ++x) {
                const std::size_t src[3] = {x, y, z};
                std::size_t dst[3] = {0, 0, 0};
                for (std::size_t i = 0; i < order.size(); ++i) dst[i] = src[order[i]];
                out.set(dst[0], dst[1], dst[2], g.at(x, y, z));
            }
        }
    }
    return out;
}

std::vector<Variant> reconstruct(const BitString& x, const PartitionCandidate& c) {
    Grid g = reshape(x, c);
    const auto non_unit = std::count_if(g.dims().begin(), g.dims().end(), [](auto d) { return d > 1; });
    std::vector<Variant> out;
    if (non_unit <= 1) {
        out.push_back({"original", std::move(g)});
        return out;
    }
    if (g.ndim() == 2) {
        out.push_back({"transpose", transpose(g)});
        out.push_back({"mirror_x", mirror(g, 0)});
        out.push_back({"mirror_y", mirror(g, 1)});
        out.insert(out.begin(), {"original", std::move(g)});
        return out;
    }
    std::vector<std::size_t> order{0, 1, 2};
    do {
        std::string tag = "axes_" + std::to_string(order[0]) + std::to_string(order[1]) + std::to_string(order[2]);
        if (order == std::vector<std::size_t>{0, 1, 2}) tag = "original";
        out.push_back({tag, permute_axes(g, order)});
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

}  // namespace dimdecon
