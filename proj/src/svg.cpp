#include "relcon/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "relcon/io.hpp"

namespace relcon {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelH = 180.0;
constexpr double kMargin = 45.0;

struct Panel {
    double y_top;
    double lo, hi; // data range
    double t0, t1;

    double px(double t) const { return kMargin + (t - t0) / (t1 - t0) * (kWidth - 2 * kMargin); }
    double py(double v) const {
        const double f = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        return y_top + kPanelH - 18.0 - f * (kPanelH - 36.0);
    }
};

void polyline(std::string& out, const Panel& p, const Trajectory& tr,
              const std::vector<double>& ys, const char* color) {
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"0.8\" points=\"";
    const std::size_t stride = std::max<std::size_t>(1, ys.size() / 2000);
    for (std::size_t k = 0; k < ys.size(); k += stride) {
        out += format_double(std::round(p.px(tr.time(k)) * 100.0) / 100.0);
        out += ',';
        out += format_double(std::round(p.py(ys[k]) * 100.0) / 100.0);
        out += ' ';
    }
    out += "\"/>\n";
}

void frame(std::string& out, const Panel& p, const std::string& label) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"#888\"/>\n<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
                  "font-family=\"sans-serif\">%s</text>\n",
                  kMargin, p.y_top + 6.0, kWidth - 2 * kMargin, kPanelH - 12.0, kMargin + 4.0,
                  p.y_top + 20.0, label.c_str());
    out += buf;
}

std::vector<double> column(const Trajectory& tr, std::size_t c) {
    std::vector<double> out(tr.samples());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = tr.component(k, c);
    return out;
}

} // namespace

void write_scenario_svg(const ScenarioResult& r, const std::filesystem::path& path) {
    const auto& run = r.run;
    const auto& first = run.trajectories.front();
    const double t0 = first.t0, t1 = first.time(first.samples() - 1);

    const bool has_distance = !r.distance.empty();
    const int panels = has_distance ? 3 : 2;
    const double height = kMargin + panels * (kPanelH + 10.0);

    std::string svg;
    char head[160];
    std::snprintf(head, sizeof head,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  kWidth, height, kWidth, height);
    svg += head;

    // co-region occupancy bands, painted under everything else
    RegionClassifier classify;
    if (r.spec.model == "fhn") classify = fhn_region_classifier(r.spec.analysis.band_mu);
    if (r.spec.model == "ei") classify = net_region_classifier(r.spec.analysis.band_mu);
    std::vector<char> together;
    if (classify) {
        together.resize(first.samples(), 0);
        for (std::size_t k = 0; k < first.samples(); ++k) {
            const int label = classify(first.state(k));
            if (label < 0) continue;
            bool all = true;
            for (std::size_t i = 1; i < run.members() && all; ++i)
                all = classify(run.trajectories[i].state(k)) == label;
            together[k] = all ? 1 : 0;
        }
    }

    auto draw_bands = [&](const Panel& p) {
        if (together.empty()) return;
        std::size_t k = 0;
        while (k < together.size()) {
            if (!together[k]) {
                ++k;
                continue;
            }
            std::size_t end = k;
            while (end + 1 < together.size() && together[end + 1]) ++end;
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%.2f\" y=\"%.1f\" width=\"%.2f\" height=\"%.1f\" "
                          "fill=\"#cfe8ff\"/>\n",
                          p.px(first.time(k)), p.y_top + 6.0,
                          std::max(0.5, p.px(first.time(end)) - p.px(first.time(k))),
                          kPanelH - 12.0);
            svg += buf;
            k = end + 1;
        }
    };

    double y_top = kMargin / 2;
    // panel 1: observed output per trial
    {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& tr : run.trajectories)
            for (std::size_t k = 0; k < tr.samples(); ++k) {
                lo = std::min(lo, tr.component(k, 0));
                hi = std::max(hi, tr.component(k, 0));
            }
        Panel p{y_top, lo, hi, t0, t1};
        draw_bands(p);
        frame(svg, p, state_names(r.spec).front());
        for (const auto& tr : run.trajectories) polyline(svg, p, tr, column(tr, 0), "#1f4e9c");
        y_top += kPanelH + 10.0;
    }
    if (has_distance) {
        double lo = 0.0, hi = *std::max_element(r.distance.begin(), r.distance.end());
        Panel p{y_top, lo, hi > 0 ? hi : 1.0, t0, t1};
        draw_bands(p);
        frame(svg, p, "max pairwise distance");
        polyline(svg, p, first, r.distance, "#a03030");
        y_top += kPanelH + 10.0;
    }
    {
        double lo = *std::min_element(first.inputs.begin(), first.inputs.end());
        double hi = *std::max_element(first.inputs.begin(), first.inputs.end());
        if (hi <= lo) hi = lo + 1.0;
        Panel p{y_top, lo, hi, t0, t1};
        frame(svg, p, "input u");
        polyline(svg, p, first, first.inputs, "#3c7a3c");
    }
    svg += "</svg>\n";
    atomic_write(path, svg);
}

} // namespace relcon
