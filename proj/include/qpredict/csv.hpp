// SPDX-License-Identifier: MIT

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qpredict::csv {

/// Shortest text that parses back to the same double.
std::string format_real(double v);
double parse_real(std::string_view text);

std::vector<std::string> split_line(std::string_view line);
std::string join(const std::vector<std::string>& cells);

/// Whole-file read; rows are split on ',' with no quoting (all fields in
/// this project are identifiers or numbers).
std::vector<std::vector<std::string>> read_file(const std::string& path);
void write_file(const std::string& path,
                const std::vector<std::vector<std::string>>& rows);

}  // namespace qpredict::csv
