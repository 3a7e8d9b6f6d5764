#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace psbf {

/// key=value file, one pair per line, '#' starts a comment, blank lines
/// ignored. Later keys overwrite earlier ones.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config(std::istream& is);

/// "1,2,3" or "lo:hi:step" (inclusive ends) or a single integer.
std::vector<std::int32_t> parse_int_list(const std::string& text);

}  // namespace psbf
