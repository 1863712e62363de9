#pragma once

#include <iosfwd>
#include <string>

#include "wsnmlp/engine.hpp"

namespace wsnmlp {

// JSON <-> ExperimentConfig.  Parsing rejects unknown keys and type
// mismatches (ConfigError); serialize(parse(x)) == serialize(parse(serialize(
// parse(x)))) holds, so configs round-trip losslessly.
ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

// Stable 8-hex-digit digest of the canonical serialized config; used to name
// run directories.
std::string config_hash8(const ExperimentConfig& config);

// Full run report as pretty-printed JSON with stable key order.
std::string report_to_json(const RunReport& report);

// One-line CSV summary.
extern const char* const kSummaryCsvHeader;  // no trailing newline
std::string summary_csv_row(const RunReport& report);

}  // namespace wsnmlp
