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

#pragma once

// Small self-contained SVG line and bar charts for the CLI reports.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace annealslice::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    /// Shaded x intervals (e.g. a pause).
    std::vector<std::pair<double, double>> shaded;
    /// Vertical dashed lines with labels.
    std::vector<std::pair<double, std::string>> markers;
};

std::string escape(const std::string& text);

void write_line_plot(std::ostream& out, const Plot& plot);

/// Bars over [lo, hi) split evenly into counts.size() bins.
void write_histogram(std::ostream& out, const std::string& title, const std::string& x_label, double lo, double hi,
                     std::span<const std::uint64_t> counts);

}  // namespace annealslice::svg
