// Copyright 2026 annealslice contributors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "annealslice/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace annealslice::svg {

namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi <= lo) {
        const double pad = std::max(1.0, std::abs(lo) * 0.05);
        lo -= pad;
        hi += pad;
    }
}

void header(std::ostream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight) << "\" fill=\"white\"/>\n"
        << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << escape(title) << "</text>\n";
}

void axes(std::ostream& out, const Frame& f, const std::string& x_label, const std::string& y_label) {
    const double left = kLeft, right = kWidth - kRight, top = kTop, bottom = kHeight - kBottom;
    out << "<g stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(right) << "\" y2=\"" << num(bottom) << "\"/>\n"
        << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\"" << num(bottom) << "\"/>\n"
        << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = f.x0 + (f.x1 - f.x0) * t / 5.0;
        const double yv = f.y0 + (f.y1 - f.y0) * t / 5.0;
        out << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(bottom + 16) << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n"
            << "<text x=\"" << num(left - 6) << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    }
    out << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(kHeight - 18) << "\" text-anchor=\"middle\">"
        << escape(x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << num((top + bottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num((top + bottom) / 2) << ")\">" << escape(y_label) << "</text>\n</g>\n";
}

}  // namespace

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

void write_line_plot(std::ostream& out, const Plot& plot) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Series& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    widen(x0, x1);
    widen(y0, y1);
    const Frame f{x0, x1, y0, y1};

    header(out, plot.title);
    for (auto [a, b] : plot.shaded) {
        const double l = f.px(std::clamp(a, x0, x1)), r = f.px(std::clamp(b, x0, x1));
        out << "<rect x=\"" << num(l) << "\" y=\"" << num(kTop) << "\" width=\"" << num(r - l) << "\" height=\""
            << num(kHeight - kTop - kBottom) << "\" fill=\"#cccccc\" fill-opacity=\"0.5\"/>\n";
    }
    axes(out, f, plot.x_label, plot.y_label);
    for (const Series& s : plot.series) {
        out << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i])) << ' ';
        }
        out << "\"/>\n";
    }
    for (const auto& [x, label] : plot.markers) {
        const double p = f.px(std::clamp(x, x0, x1));
        out << "<line x1=\"" << num(p) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(p) << "\" y2=\"" << num(kHeight - kBottom)
            << "\" stroke=\"#2ca02c\" stroke-dasharray=\"5,4\"/>\n"
            << "<text x=\"" << num(p + 4) << "\" y=\"" << num(kTop + 14) << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << escape(label) << "</text>\n";
    }
    double ly = kTop + 14;
    for (const Series& s : plot.series) {
        if (s.label.empty()) continue;
        out << "<text x=\"" << num(kWidth - kRight - 6) << "\" y=\"" << num(ly) << "\" text-anchor=\"end\" fill=\""
            << escape(s.color) << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
        ly += 16;
    }
    out << "</svg>\n";
}

void write_histogram(std::ostream& out, const std::string& title, const std::string& x_label, double lo, double hi,
                     std::span<const std::uint64_t> counts) {
    double top = 1.0;
    for (std::uint64_t c : counts) top = std::max(top, static_cast<double>(c));
    if (!(hi > lo)) hi = lo + 1.0;
    const Frame f{lo, hi, 0.0, top};
    header(out, title);
    axes(out, f, x_label, "count");
    const double w = (hi - lo) / std::max<std::size_t>(counts.size(), 1);
    for (std::size_t b = 0; b < counts.size(); ++b) {
        const double l = f.px(lo + w * b), r = f.px(lo + w * (b + 1));
        const double y = f.py(static_cast<double>(counts[b]));
        out << "<rect x=\"" << num(l) << "\" y=\"" << num(y) << "\" width=\"" << num(std::max(0.0, r - l - 1)) << "\" height=\""
            << num(kHeight - kBottom - y) << "\" fill=\"#1f77b4\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace annealslice::svg
