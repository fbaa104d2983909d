// Copyright 2026 The evinlier authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVINLIER_IO_HPP
#define EVINLIER_IO_HPP

#include <string>
#include <vector>

namespace evinlier {

/// Reads a single-column CSV of nonnegative reals: optional header "x",
/// '.' decimal separator, LF or CRLF endings. Parse failures throw
/// std::invalid_argument carrying the 1-based line number.
std::vector<double> read_csv_column(const std::string& path);
std::vector<double> parse_csv_column(const std::string& text,
                                     const std::string& origin);

/// Shortest round-trip decimal rendering of a double (stable across runs).
std::string format_double(double v);

}  // namespace evinlier

#endif  // EVINLIER_IO_HPP
