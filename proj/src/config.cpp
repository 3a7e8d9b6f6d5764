#include "psbf/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psbf {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    return parse_config(is);
}

std::vector<std::int32_t> parse_int_list(const std::string& text) {
    std::vector<std::int32_t> out;
    if (text.find(':') != std::string::npos) {
        std::int32_t lo, hi, step = 1;
        char c1, c2;
        std::istringstream ss(text);
        if (!(ss >> lo >> c1 >> hi) || c1 != ':')
            throw std::runtime_error("bad range: " + text);
        if (ss >> c2 >> step) {
            if (c2 != ':' || step <= 0) throw std::runtime_error("bad range: " + text);
        }
        for (std::int32_t v = lo; v <= hi; v += step) out.push_back(v);
        return out;
    }
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::int32_t(std::stol(item)));
    }
    if (out.empty()) throw std::runtime_error("empty integer list: " + text);
    return out;
}

}  // namespace psbf
