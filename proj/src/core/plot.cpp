#include "core/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "core/error.hpp"
#include "core/keyvalue.hpp"

namespace tfres {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
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

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double transform(double v) const { return log ? std::log10(v) : v; }
    double fraction(double v) const { return (transform(v) - lo) / (hi - lo); }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double e = std::floor(lo); e <= std::ceil(hi) + 1e-9; e += 1.0) {
                if (e >= lo - 1e-9 && e <= hi + 1e-9) out.push_back(std::pow(10.0, e));
            }
            return out;
        }
        const double raw = (hi - lo) / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0}) {
            if (m * mag >= raw) {
                step = m * mag;
                break;
            }
        }
        for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) out.push_back(t);
        return out;
    }
};

Axis make_axis(std::vector<double> values, bool log) {
    Axis axis;
    axis.log = log;
    if (values.empty()) {
        axis.lo = 0.0;
        axis.hi = 1.0;
        return axis;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        const double t = axis.transform(v);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (hi - lo < 1e-12) {
        const double pad = std::max(std::abs(lo) * 0.1, log ? 0.5 : 1.0);
        lo -= pad;
        hi += pad;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    axis.lo = lo;
    axis.hi = hi;
    return axis;
}

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

}  // namespace

std::string emit_plot(const Table& table, const AxesSpec& axes) {
    const std::size_t xc = table.column(axes.x);
    const std::size_t yc = table.column(axes.y);
    const std::optional<std::size_t> gc = axes.group ? std::optional(table.column(*axes.group)) : std::nullopt;
    std::optional<std::size_t> sc;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i] == "status") sc = i;
    }

    std::vector<Series> series;
    std::map<std::string, std::size_t> index;
    for (const auto& row : table.rows) {
        if (sc && row[*sc] != "ok") continue;
        if (row[xc].empty() || row[yc].empty()) continue;
        const double x = parse_double(row[xc], axes.x);
        const double y = parse_double(row[yc], axes.y);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        if ((axes.log_x && x <= 0.0) || (axes.log_y && y <= 0.0)) continue;
        const std::string key = gc ? axes.group.value() + "=" + row[*gc] : axes.y;
        auto [it, inserted] = index.try_emplace(key, series.size());
        if (inserted) series.push_back({key, {}});
        series[it->second].points.emplace_back(x, y);
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (auto& s : series) {
        std::stable_sort(s.points.begin(), s.points.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [x, y] : s.points) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    if (axes.hline && (!axes.log_y || *axes.hline > 0.0)) ys.push_back(*axes.hline);
    const Axis ax = make_axis(xs, axes.log_x);
    const Axis ay = make_axis(ys, axes.log_y);

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double v) { return kLeft + ax.fraction(v) * pw; };
    auto sy = [&](double v) { return kTop + (1.0 - ay.fraction(v)) * ph; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" + px(kHeight) +
           "\" viewBox=\"0 0 " + px(kWidth) + " " + px(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!axes.title.empty()) {
        svg += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
               escape(axes.title) + "</text>\n";
    }
    svg += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(pw) + "\" height=\"" + px(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ax.ticks()) {
        const double x = sx(t);
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(kTop + ph) + "\" x2=\"" + px(x) + "\" y2=\"" +
               px(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(x) + "\" y=\"" + px(kTop + ph + 18) + "\" text-anchor=\"middle\">" + num(t) +
               "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = sy(t);
        svg += "<line x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(kLeft) + "\" y2=\"" + px(y) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" + num(t) +
               "</text>\n";
    }
    svg += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"" + px(kHeight - 12) + "\" text-anchor=\"middle\">" +
           escape(axes.x) + (axes.log_x ? " (log)" : "") + "</text>\n";
    svg += "<text x=\"16\" y=\"" + px(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           px(kTop + ph / 2) + ")\">" + escape(axes.y) + (axes.log_y ? " (log)" : "") + "</text>\n";

    if (axes.hline && (!axes.log_y || *axes.hline > 0.0)) {
        const double y = sy(*axes.hline);
        svg += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(y) + "\" x2=\"" + px(kLeft + pw) + "\" y2=\"" + px(y) +
               "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
        const std::string label = axes.hline_label.empty() ? num(*axes.hline) : axes.hline_label;
        svg += "<text x=\"" + px(kLeft + pw - 4) + "\" y=\"" + px(y - 4) +
               "\" text-anchor=\"end\" fill=\"gray\">" + escape(label) + "</text>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        const auto& s = series[i];
        std::string pts;
        for (const auto& [x, y] : s.points) {
            if (!pts.empty()) pts += ' ';
            pts += px(sx(x)) + "," + px(sy(y));
        }
        svg += "<g stroke=\"" + std::string(color) + "\" fill=\"" + color + "\">\n";
        if (s.points.size() > 1) svg += "<polyline fill=\"none\" points=\"" + pts + "\"/>\n";
        for (const auto& [x, y] : s.points) {
            svg += "<circle cx=\"" + px(sx(x)) + "\" cy=\"" + px(sy(y)) + "\" r=\"3\"/>\n";
        }
        svg += "</g>\n";
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        svg += "<rect x=\"" + px(kWidth - kRight + 12) + "\" y=\"" + px(ly - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
               color + "\"/>\n";
        svg += "<text x=\"" + px(kWidth - kRight + 28) + "\" y=\"" + px(ly + 1) + "\">" + escape(s.name) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace tfres
