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

// Minimal CSV support for the flat numeric tables this project emits: no
// quoting, comma separated, first row is the header.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace annealslice::csv {

/// Shortest form that round-trips: %.17g.
std::string number(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; ValidationError if missing.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
    /// nullopt for an empty field.
    std::optional<double> optional_number(std::size_t row, std::size_t col) const;
    const std::string& text(std::size_t row, std::size_t col) const;
};

Table read(std::istream& in);
Table read_file(const std::string& path);

}  // namespace annealslice::csv
