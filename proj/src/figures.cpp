#include "kpzlab/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "kpzlab/harness.hpp"

namespace kpzlab {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

bool Plot::empty() const {
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) return false;
    return true;
}

std::string Plot::to_svg() const {
    const double ml = 60, mr = 20, mt = 30, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(width / 2.0) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
       << "</text>\n";
    if (empty()) {
        os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
           << "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
        os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(mt + ph / 2)
           << "\" text-anchor=\"middle\" font-size=\"14\" fill=\"#666\">no data</text>\n</svg>\n";
        return os.str();
    }
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };
    os << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n</g>\n";
    os << "<g id=\"ticks\" font-size=\"10\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(mt + ph + 14) << "\" text-anchor=\"middle\">"
           << label(xv) << "</text>\n";
        os << "<text x=\"" << num(ml - 4) << "\" y=\"" << num(py(yv) + 3) << "\" text-anchor=\"end\">" << label(yv)
           << "</text>\n";
    }
    os << "</g>\n";
    os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 12.0) << "\" text-anchor=\"middle\" font-size=\"12\">"
       << escape(xlabel) << "</text>\n";
    os << "<text x=\"14\" y=\"" << num(mt + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
       << num(mt + ph / 2) << ")\">" << escape(ylabel) << "</text>\n";
    for (size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        os << "<g id=\"layer" << si << "\" data-name=\"" << escape(s.name) << "\">\n";
        std::string d;
        bool pen = false;
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen = false;
                continue;
            }
            d += (pen ? " L" : (d.empty() ? "M" : " M")) + num(px(s.x[i])) + ' ' + num(py(s.y[i]));
            pen = true;
        }
        if (!d.empty())
            os << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << num(s.width)
               << '"' << (s.dashed ? " stroke-dasharray=\"5 3\"" : "") << "/>\n";
        if (s.markers)
            for (size_t i = 0; i < s.x.size(); ++i)
                if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                    os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"3\" fill=\""
                       << s.color << "\"/>\n";
        os << "</g>\n";
    }
    os << "<g id=\"legend\" font-size=\"10\">\n";
    for (size_t si = 0; si < series.size(); ++si) {
        const double y = mt + 12 + 12.0 * double(si);
        os << "<line x1=\"" << num(ml + 8) << "\" y1=\"" << num(y - 3) << "\" x2=\"" << num(ml + 24) << "\" y2=\""
           << num(y - 3) << "\" stroke=\"" << series[si].color << "\"/>\n";
        os << "<text x=\"" << num(ml + 28) << "\" y=\"" << num(y) << "\">" << escape(series[si].name) << "</text>\n";
    }
    for (size_t k = 0; k < notes.size(); ++k)
        os << "<text x=\"" << num(ml + pw - 4) << "\" y=\"" << num(mt + 12 + 12.0 * double(k))
           << "\" text-anchor=\"end\">" << escape(notes[k]) << "</text>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string Plot::to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "series,x,y\n";
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << s.name << ',' << s.x[i] << ',' << s.y[i] << '\n';
        }
    return os.str();
}

std::vector<std::string> emit_plot(const Plot& plot, const std::filesystem::path& dir, const std::string& name) {
    const auto svg = dir / (name + ".svg"), csv = dir / (name + ".csv");
    write_file(svg, plot.to_svg());
    write_file(csv, plot.to_csv());
    return {svg.string(), csv.string()};
}

Plot interface_plot(const ScalingParams& params, const InterfaceTrace& trace, const std::vector<GeodesicRay>& rays) {
    Plot p;
    p.title = "interface from x0 = " + label(trace.x0) + ", s = " + label(trace.s);
    p.xlabel = "x";
    p.ylabel = "t";
    for (size_t r = 0; r < rays.size(); ++r) {
        Series s;
        s.name = std::string("ray ") + (rays[r].side == Side::Left ? "L" : "R") + " xi=" + label(rays[r].xi);
        s.color = rays[r].side == Side::Left ? "#9ecae1" : "#fdae6b";
        s.width = 1.0;
        s.dashed = true;
        for (size_t k = 0; k < rays[r].size(); ++k) {
            s.x.push_back(position_of(params, rays[r].m[k]));
            s.y.push_back(time_of(params, rays[r].levels[k]));
        }
        p.series.push_back(std::move(s));
    }
    Series lo{"tau-", {}, {}, "#08519c", 2.0}, hi{"tau+", {}, {}, "#a50f15", 1.5};
    for (size_t k = 0; k < trace.size(); ++k) {
        lo.y.push_back(trace.times[k]);
        hi.y.push_back(trace.times[k]);
        lo.x.push_back(trace.minus[k].finite() ? trace.minus[k].x(params) : kNaN);
        hi.x.push_back(trace.plus[k].finite() ? trace.plus[k].x(params) : kNaN);
    }
    p.series.push_back(std::move(lo));
    p.series.push_back(std::move(hi));
    return p;
}

Plot bubble_plot(const ScalingParams& params, const InterfaceTrace& trace, const std::vector<Bubble>& bubbles) {
    Plot p = interface_plot(params, trace);
    p.title = "bubbles from x0 = " + label(trace.x0);
    Series open{"split", {}, {}, "#31a354", 1.0, false, true}, close{"re-meet", {}, {}, "#756bb1", 1.0, false, true};
    for (const auto& b : bubbles) {
        if (trace.minus[b.open].finite()) {
            open.x.push_back(trace.minus[b.open].x(params));
            open.y.push_back(trace.times[b.open]);
            open.x.push_back(kNaN);
            open.y.push_back(kNaN);
        }
        if (trace.minus[b.close].finite()) {
            close.x.push_back(trace.minus[b.close].x(params));
            close.y.push_back(trace.times[b.close]);
            close.x.push_back(kNaN);
            close.y.push_back(kNaN);
        }
    }
    p.series.push_back(std::move(open));
    p.series.push_back(std::move(close));
    p.notes.push_back(std::to_string(bubbles.size()) + " bubble(s)");
    return p;
}

Plot profile_plot(const std::string& title, const std::vector<double>& x,
                  const std::vector<std::pair<std::string, std::vector<double>>>& ys) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    Plot p;
    p.title = title;
    p.xlabel = "x";
    p.ylabel = "value";
    for (size_t k = 0; k < ys.size(); ++k) {
        Series s;
        s.name = ys[k].first;
        s.x = x;
        s.y = ys[k].second;
        s.color = palette[k % 6];
        p.series.push_back(std::move(s));
    }
    return p;
}

}  // namespace kpzlab
