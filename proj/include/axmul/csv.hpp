#pragma once

#include <string>
#include <vector>

namespace axmul {

// Minimal CSV cell handling: comma separation with double-quote grouping.
// Configuration names carry commas, so those fields are always quoted.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_quote(const std::string& s);

} // namespace axmul
