#pragma once

// JSON and CSV emission for CLI reports. Every real is rounded to 12
// significant digits before serialization so that reports are byte-stable.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "biasaudit/audit.hpp"

namespace biasaudit::report {

using Json = nlohmann::ordered_json;

/// Rounded to 12 significant digits; null for non-finite values.
Json number(double value);
Json numbers(const std::vector<double>& values);

/// "%.12g" text used for CSV cells.
std::string formatNumber(double value);

std::uint64_t fnv1a64(std::string_view bytes);
/// {"path": ..., "bytes": ..., "fnv1a64": "<16 hex digits>"}
Json fileDigest(const std::filesystem::path& path);

Json toJson(const BiasWitness& witness);
Json toJson(const ComparabilityReport& report);
Json toJson(const TrustworthinessReport& report);

/// Pretty-printed with two-space indentation and a trailing newline.
void writeJson(std::ostream& out, const Json& json);
void saveJson(const std::filesystem::path& path, const Json& json);

/// Header row plus data rows; cells containing ',' or '"' are quoted.
void writeCsv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

}  // namespace biasaudit::report
