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

#include "evinlier/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evinlier {

std::vector<double> parse_csv_column(const std::string& text,
                                     const std::string& origin) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // trim spaces
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t");
    const std::string token = line.substr(b, e - b + 1);
    if (line_no == 1 && (token == "x" || token == "\"x\"")) continue;

    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() ||
        !std::isfinite(v)) {
      std::ostringstream msg;
      msg << origin << ": line " << line_no << ": cannot parse '" << token
          << "' as a number";
      throw std::invalid_argument(msg.str());
    }
    if (v < 0.0) {
      std::ostringstream msg;
      msg << origin << ": line " << line_no
          << ": negative value not allowed";
      throw std::invalid_argument(msg.str());
    }
    values.push_back(v);
  }
  if (values.empty())
    throw std::invalid_argument(origin + ": no data rows");
  return values;
}

std::vector<double> read_csv_column(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_csv_column(buf.str(), path);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace evinlier
