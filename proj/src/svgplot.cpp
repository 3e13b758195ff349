// SPDX-License-Identifier: Apache-2.0
#include "lmp/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lmp {

namespace {

struct Style {
    const char* color;
    bool dashed;
};

Style method_style(const std::string& method) {
    if (method == "lmp") return {"#e07b00", false};
    if (method == "zd-groth") return {"#c62828", false};
    if (method == "bomp-elim") return {"#7b1fa2", true};
    if (method == "nyquist") return {"#1565c0", true};
    if (method == "random") return {"#212121", true};
    return {"#607d8b", false};
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

}  // namespace

void emit_plot(const rfsim::ErrorCurve& curve, std::ostream& out) {
    if (curve.cells.empty()) throw std::invalid_argument("emit_plot: empty results");

    // panel per M; within a panel, (method -> points sorted by SNR)
    std::map<int, std::map<std::string, std::vector<const rfsim::ErrorCell*>>> panels;
    for (const auto& c : curve.cells) panels[c.m][c.method].push_back(&c);

    const double pw = 360, ph = 300;          // panel size
    const double ml = 56, mr = 14, mt = 28, mb = 72;  // margins within a panel
    const double width = pw * static_cast<double>(panels.size());
    const double height = ph;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    int panel_idx = 0;
    for (const auto& [m, methods] : panels) {
        const double x0 = pw * panel_idx + ml;
        const double y0 = mt;
        const double plot_w = pw - ml - mr;
        const double plot_h = ph - mt - mb;

        double snr_lo = std::numeric_limits<double>::infinity(), snr_hi = -snr_lo;
        long max_trials = 1;
        bool any_positive = false;
        for (const auto& [_, cells] : methods)
            for (const auto* c : cells) {
                snr_lo = std::min(snr_lo, c->snr_db);
                snr_hi = std::max(snr_hi, c->snr_db);
                max_trials = std::max(max_trials, c->trials);
                if (c->errors > 0) any_positive = true;
            }
        if (snr_hi == snr_lo) snr_hi = snr_lo + 1.0;
        const double floor_rate = 1.0 / static_cast<double>(max_trials);
        const double log_lo = std::log10(floor_rate), log_hi = 0.0;

        auto sx = [&](double snr) { return x0 + (snr - snr_lo) / (snr_hi - snr_lo) * plot_w; };
        auto sy = [&](double rate) {
            const double r = std::max(rate, floor_rate);
            return y0 + (log_hi - std::log10(r)) / (log_hi - log_lo) * plot_h;
        };

        // frame and decade gridlines
        out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << plot_w
            << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (double e = std::ceil(log_lo); e <= 0.0; e += 1.0) {
            const double y = sy(std::pow(10.0, e));
            out << "<line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x0 + plot_w
                << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n"
                << "<text x=\"" << x0 - 6 << "\" y=\"" << y + 4
                << "\" text-anchor=\"end\" font-size=\"11\">1e" << static_cast<int>(e)
                << "</text>\n";
        }
        // x ticks at distinct SNR values
        std::vector<double> ticks;
        for (const auto& [_, cells] : methods)
            for (const auto* c : cells) ticks.push_back(c->snr_db);
        std::sort(ticks.begin(), ticks.end());
        ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
        for (double t : ticks) {
            out << "<line x1=\"" << sx(t) << "\" y1=\"" << y0 + plot_h << "\" x2=\"" << sx(t)
                << "\" y2=\"" << y0 + plot_h + 4 << "\" stroke=\"#444\"/>\n"
                << "<text x=\"" << sx(t) << "\" y=\"" << y0 + plot_h + 16
                << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(t) << "</text>\n";
        }
        out << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << y0 + plot_h + 32
            << "\" text-anchor=\"middle\" font-size=\"12\">SNR [dB]</text>\n"
            << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << y0 - 10
            << "\" text-anchor=\"middle\" font-size=\"13\">M = " << m << "</text>\n";
        if (!any_positive)
            out << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << y0 + 14
                << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"#a00\">"
                << "all error rates zero; shown at floor 1/" << max_trials << "</text>\n";

        // polylines
        int legend_row = 0;
        for (const auto& [method, cells_in] : methods) {
            std::vector<const rfsim::ErrorCell*> cells = cells_in;
            std::sort(cells.begin(), cells.end(),
                      [](const auto* a, const auto* b) { return a->snr_db < b->snr_db; });
            const Style st = method_style(method);
            out << "<polyline fill=\"none\" stroke=\"" << st.color << "\" stroke-width=\"1.6\""
                << (st.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
            for (const auto* c : cells) out << sx(c->snr_db) << ',' << sy(c->error_rate()) << ' ';
            out << "\"/>\n";
            for (const auto* c : cells)
                out << "<circle cx=\"" << sx(c->snr_db) << "\" cy=\"" << sy(c->error_rate())
                    << "\" r=\"2.2\" fill=\"" << st.color << "\"/>\n";
            // legend, below the x-axis label
            const double lx = x0 + 8 + 110.0 * (legend_row % 3);
            const double ly = y0 + plot_h + 46 + 12.0 * (legend_row / 3);
            out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 18
                << "\" y2=\"" << ly - 4 << "\" stroke=\"" << st.color << "\" stroke-width=\"1.6\""
                << (st.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
                << "<text x=\"" << lx + 22 << "\" y=\"" << ly
                << "\" font-size=\"11\">" << method << "</text>\n";
            ++legend_row;
        }
        ++panel_idx;
    }
    out << "</svg>\n";
}

}  // namespace lmp
