#include "qtm/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "qtm/errors.hpp"

namespace qtm {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

std::set<std::string> parameter_keys() {
    return {"B1",     "B2",      "B3",      "T1",      "T2",   "T3",   "gamma1", "gamma2",
            "gamma3", "lambda1", "lambda2", "lambda3", "phi1", "phi2", "phi3",   "tau"};
}

KeyValues parse_key_values(std::istream& in, const std::string& source,
                           const std::set<std::string>& allowed) {
    KeyValues kv;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = source + ":" + std::to_string(number);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParameterError(where + ": empty key or value");
        if (!allowed.count(key)) throw ParameterError(where + ": unknown key '" + key + "'");
        if (!kv.emplace(key, value).second) {
            throw ParameterError(where + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues read_key_values(const std::string& path, const std::set<std::string>& allowed) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file '" + path + "'");
    return parse_key_values(in, path, allowed);
}

double parse_real(const std::string& key, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ParameterError("value of '" + key + "' is not a finite number: '" + text + "'");
    }
    return v;
}

MachineParams apply_parameters(MachineParams base, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "B3" || !is_parameter_name(key)) continue;
        set_parameter(base, key, parse_real(key, value));
    }
    if (const auto it = kv.find("B3"); it != kv.end()) {
        if (kv.count("B2")) throw ParameterError("give either B2 or B3, not both");
        set_parameter(base, "B3", parse_real("B3", it->second));
    }
    return base;
}

} // namespace qtm
