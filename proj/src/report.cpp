#include "biasaudit/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "biasaudit/errors.hpp"

namespace biasaudit::report {

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  const double rounded = std::strtod(buf, nullptr);
  return rounded == 0.0 ? 0.0 : rounded;  // no negative zero
}

Json numbers(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

std::string formatNumber(double value) {
  if (!std::isfinite(value)) return "nan";
  if (value == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json fileDigest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path.string() + "'", 0);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  Json j;
  j["path"] = path.string();
  j["bytes"] = bytes.size();
  j["fnv1a64"] = hex;
  return j;
}

Json toJson(const BiasWitness& witness) {
  Json j;
  j["kind"] = toString(witness.kind);
  j["score"] = toString(witness.score);
  j["description"] = witness.description;
  j["tolerance"] = number(witness.tolerance);
  j["revalidated"] = revalidate(witness);
  Json scores = Json::object();
  for (const auto& s : witness.scores) scores[s.name] = number(s.value);
  j["scores"] = std::move(scores);
  Json vectors = Json::object();
  for (const auto& v : witness.vectors) vectors[v.name] = numbers(v.values);
  j["vectors"] = std::move(vectors);
  return j;
}

namespace {

Json configJson(const ProbeConfig& cfg) {
  Json j;
  j["dimension"] = cfg.dimension;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["tolerance"] = number(cfg.tolerance);
  j["max_stored_witnesses"] = cfg.maxStoredWitnesses;
  return j;
}

Json witnessesJson(const std::vector<BiasWitness>& witnesses) {
  Json out = Json::array();
  for (const auto& w : witnesses) out.push_back(toJson(w));
  return out;
}

}  // namespace

Json toJson(const ComparabilityReport& report) {
  Json j;
  j["score"] = toString(report.score);
  j["config"] = configJson(report.config);
  j["skipped_draws"] = report.skippedDraws;
  j["extrema_match_expected"] = report.extremaMatchExpected;
  j["extrema_independent_of_attributes"] = report.extremaIndependentOfAttributes;
  j["max_spread"] = number(report.maxSpread);
  Json records = Json::array();
  for (const auto& r : report.records) {
    Json rec;
    rec["trial"] = r.trial;
    rec["attribute_difference_norm"] = number(r.attributeDifferenceNorm);
    rec["empirical_max"] = number(r.empiricalMax);
    rec["empirical_min"] = number(r.empiricalMin);
    rec["expected_max"] = number(r.expectedMax);
    rec["expected_min"] = number(r.expectedMin);
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  j["witnesses"] = witnessesJson(report.witnesses);
  return j;
}

Json toJson(const TrustworthinessReport& report) {
  Json j;
  j["score"] = toString(report.score);
  j["config"] = configJson(report.config);
  j["trials_run"] = report.trialsRun;
  j["skipped_trials"] = report.skippedTrials;
  j["witness_count"] = report.witnessCount;
  j["trustworthy_on_probe"] = report.witnessCount == 0;
  j["witnesses"] = witnessesJson(report.witnesses);
  return j;
}

void writeJson(std::ostream& out, const Json& json) { out << json.dump(2) << '\n'; }

void saveJson(const std::filesystem::path& path, const Json& json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write '" + path.string() + "'", 0);
  writeJson(out, json);
}

namespace {

std::string csvCell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void writeRow(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out << ',';
    out << csvCell(row[i]);
  }
  out << '\n';
}

}  // namespace

void writeCsv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  writeRow(out, header);
  for (const auto& row : rows) writeRow(out, row);
}

}  // namespace biasaudit::report
