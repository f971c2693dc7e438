#include "dimdecon/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace dimdecon {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_sweep_svg(const ScoreSeries& series, const SpikeReport& spikes, std::ostream& out,
                     const std::string& title) {
    constexpr double W = 900, H = 420, left = 70, right = 20, top = 40, bottom = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const auto& p : series.points) {
        if (p.flagged) continue;
        const double x = static_cast<double>(p.candidate.leading());
        if (!any) {
            xmin = xmax = x;
            ymin = ymax = p.value;
            any = true;
        }
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, p.value);
        ymax = std::max(ymax, p.value);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double pw = W - left - right, ph = H - top - bottom;
    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    const auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
        << W << ' ' << H << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    std::string heading = title.empty() ? std::string(measure_name(series.measure)) + " sweep" : title;
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(heading)
        << "</text>\n";
    // axes
    out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        out << "<text x=\"" << num(sx(xv)) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
            << tick(std::round(xv)) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">leading dimension</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">score (bits, normalized)</text>\n";
    if (any) {
        out << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1\" points=\"";
        bool first = true;
        for (const auto& p : series.points) {
            if (p.flagged) continue;
            if (!first) out << ' ';
            first = false;
            out << num(sx(static_cast<double>(p.candidate.leading()))) << ',' << num(sy(p.value));
        }
        out << "\"/>\n";
    }
    for (std::size_t i = 0; i < spikes.ranked.size(); ++i) {
        const auto& s = spikes.ranked[i];
        const double x = sx(static_cast<double>(s.candidate.leading())), y = sy(s.score);
        out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"4\" fill=\"none\" stroke=\"#c0392b\"/>\n";
        if (i < 10) {
            out << "<text x=\"" << num(x) << "\" y=\"" << num(std::min(y + 16, top + ph - 2))
                << "\" text-anchor=\"middle\" fill=\"#c0392b\">" << format_dims(s.candidate.dims) << "</text>\n";
        }
    }
    out << "</g>\n</svg>\n";
}

}  // namespace dimdecon
