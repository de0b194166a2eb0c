#include "gam/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gam {

namespace {

constexpr double width = 720.0, height = 480.0;
constexpr double left = 70.0, right = 180.0, top = 40.0, bottom = 55.0;

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                               "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string fmt(double v, const char* format = "%.4g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

// Tick spacing of 1, 2 or 5 times a power of ten giving about n ticks.
double nice_step(double span, int n) {
    const double raw = span / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0})
        if (f * mag >= raw) return f * mag;
    return 10.0 * mag;
}

double parse_cell(const std::string& s, const char* column) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error(std::string("CSV column '") + column + "' holds non-numeric value '" + s + "'");
}

Figure curves(const CsvTable& table, const char* y_column, std::optional<int> only_M) {
    const std::size_t c_scheme = table.column("scheme"), c_m = table.column("M"), c_snr = table.column("snr_db"),
                      c_y = table.column(y_column);
    if (table.rows.empty()) throw std::runtime_error("CSV has no data rows");

    std::map<std::pair<std::string, int>, Series> by_key;
    for (const auto& row : table.rows) {
        if (row[c_y].empty()) continue;
        const int M = static_cast<int>(parse_cell(row[c_m], "M"));
        if (only_M && M != *only_M && M != 0) continue;
        auto& s = by_key[{row[c_scheme], M}];
        if (s.label.empty()) s.label = M ? row[c_scheme] + " M=" + std::to_string(M) : row[c_scheme];
        s.x.push_back(parse_cell(row[c_snr], "snr_db"));
        s.y.push_back(parse_cell(row[c_y], y_column));
    }
    if (by_key.empty()) throw std::runtime_error(std::string("CSV has no rows with a '") + y_column + "' value");

    Figure fig;
    fig.x_label = "SNR [dB]";
    for (auto& [key, s] : by_key) {
        std::vector<std::size_t> idx(s.x.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s.x[a] < s.x[b]; });
        Series sorted{s.label, {}, {}, false, false};
        for (auto i : idx) {
            sorted.x.push_back(s.x[i]);
            sorted.y.push_back(s.y[i]);
        }
        fig.series.push_back(std::move(sorted));
    }
    return fig;
}

} // namespace

Figure mi_curves_figure(const CsvTable& table, std::optional<int> only_M) {
    Figure fig = curves(table, "mi_bits", only_M);
    fig.title = "Mutual information";
    fig.y_label = "MI [b/s/Hz]";
    // Drop any tabulated capacity rows; the dense closed-form curve replaces them.
    std::erase_if(fig.series, [](const Series& s) { return s.label == "capacity"; });
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : fig.series)
        for (double x : s.x) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    if (fig.series.empty()) {
        const std::size_t c_snr = table.column("snr_db");
        for (const auto& row : table.rows) {
            const double x = parse_cell(row[c_snr], "snr_db");
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    Series cap{"capacity log2(1+S)", {}, {}, false, true};
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / 0.25)) + 1);
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        cap.x.push_back(x);
        cap.y.push_back(awgn_capacity(db_to_linear(x)));
    }
    fig.series.insert(fig.series.begin(), std::move(cap));
    return fig;
}

Figure papr_curves_figure(const CsvTable& table, std::optional<int> only_M) {
    Figure fig = curves(table, "papr_db", only_M);
    fig.title = "Peak-to-average power ratio";
    fig.y_label = "PAPR [dB]";
    return fig;
}

Figure constellation_figure(const Constellation& c) {
    Figure fig;
    fig.title = std::string(to_string(c.scheme())) + ", M=" + std::to_string(c.size()) +
                ", PAPR=" + fmt(papr_db(c), "%.3f") + " dB";
    fig.x_label = "In-phase";
    fig.y_label = "Quadrature";
    fig.equal_aspect = true;
    fig.guide_radius = c.peak_magnitude();
    Series pts{"points", {}, {}, true, false};
    for (const auto& p : c.points()) {
        pts.x.push_back(p.real());
        pts.y.push_back(p.imag());
    }
    fig.series.push_back(std::move(pts));
    return fig;
}

std::string render_svg(const Figure& fig) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : fig.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (fig.guide_radius) {
        const double r = *fig.guide_radius;
        x0 = std::min(x0, -r);
        x1 = std::max(x1, r);
        y0 = std::min(y0, -r);
        y1 = std::max(y1, r);
    }
    if (!(x1 > x0)) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if (!(y1 > y0)) {
        y0 -= 1.0;
        y1 += 1.0;
    }

    double pw = width - left - right, ph = height - top - bottom;
    if (fig.equal_aspect) {
        // Pad both ranges so one data unit has the same length on each axis.
        const double pad = 0.05 * std::max(x1 - x0, y1 - y0);
        x0 -= pad, x1 += pad, y0 -= pad, y1 += pad;
        const double unit = std::min(pw / (x1 - x0), ph / (y1 - y0));
        const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        x0 = cx - pw / unit / 2, x1 = cx + pw / unit / 2;
        y0 = cy - ph / unit / 2, y1 = cy + ph / unit / 2;
    } else {
        const double pad = 0.03 * (y1 - y0);
        y0 -= pad, y1 += pad;
    }
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(fig.title)
        << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = nice_step(x1 - x0, 8), ys = nice_step(y1 - y0, 6);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        svg << "<line x1=\"" << fmt(sx(t)) << "\" y1=\"" << top << "\" x2=\"" << fmt(sx(t)) << "\" y2=\"" << top + ph
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << fmt(sx(t)) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
            << fmt(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
        svg << "<line x1=\"" << left << "\" y1=\"" << fmt(sy(t)) << "\" x2=\"" << left + pw << "\" y2=\"" << fmt(sy(t))
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << fmt(sy(t) + 4) << "\" text-anchor=\"end\">"
            << fmt(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 14 << "\" text-anchor=\"middle\">"
        << escape(fig.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << top + ph / 2 << ")\">" << escape(fig.y_label) << "</text>\n";

    if (fig.guide_radius) {
        const double r = *fig.guide_radius;
        svg << "<ellipse cx=\"" << fmt(sx(0)) << "\" cy=\"" << fmt(sy(0)) << "\" rx=\"" << fmt(sx(r) - sx(0))
            << "\" ry=\"" << fmt(sy(0) - sy(r)) << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    }

    for (std::size_t k = 0; k < fig.series.size(); ++k) {
        const auto& s = fig.series[k];
        const char* color = s.label.rfind("capacity", 0) == 0 ? "black" : palette[k % std::size(palette)];
        if (s.scatter) {
            for (std::size_t i = 0; i < s.x.size(); ++i)
                svg << "<circle cx=\"" << fmt(sx(s.x[i]), "%.2f") << "\" cy=\"" << fmt(sy(s.y[i]), "%.2f")
                    << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        } else {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
                << (s.dashed ? " stroke-dasharray=\"6 3\"" : "") << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                svg << (i ? " " : "") << fmt(sx(s.x[i]), "%.2f") << ',' << fmt(sy(s.y[i]), "%.2f");
            svg << "\"/>\n";
        }
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        svg << "<line x1=\"" << width - right + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right + 32
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << width - right + 38 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace gam
