#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>

#include "qtm/model.hpp"

namespace qtm {

// Flat "key = value" text. '#' starts a comment; blank lines are ignored.
// Throws ParameterError naming the source and line for malformed lines,
// duplicate keys and keys outside `allowed`.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream& in, const std::string& source,
                           const std::set<std::string>& allowed);
KeyValues read_key_values(const std::string& path, const std::set<std::string>& allowed);

// The parameter keys: B1 B2 T1 T2 T3 gamma1..3 lambda1..3 phi1..3 tau (B3 is
// accepted as well and moves B2).
std::set<std::string> parameter_keys();

// Parses a finite real; throws ParameterError mentioning `key` otherwise.
double parse_real(const std::string& key, const std::string& text);

// Applies the parameter keys found in kv on top of base. Non-parameter keys are
// ignored here. B3 is applied after B1 and B2.
MachineParams apply_parameters(MachineParams base, const KeyValues& kv);

} // namespace qtm
