#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "urllc/simulator.hpp"

namespace urllc::tools {

// Keys accepted in config files and by --set, in emission order.
const std::vector<std::string>& config_keys();

// Applies one key=value pair; throws ParameterError naming the key on an
// unknown key or an unparsable value.
void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value);

// Flat "key = value" text; '#' starts a comment. Starts from defaults.
SimConfig parse_config(std::istream& in);
SimConfig parse_config_file(const std::string& path);
SimConfig parse_config_text(const std::string& text);

// Inverse of parse_config; every key, full precision.
void emit_config(std::ostream& out, const SimConfig& cfg);
std::string emit_config(const SimConfig& cfg);

}  // namespace urllc::tools
