#include "biasaudit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "biasaudit/errors.hpp"

namespace biasaudit::io {

namespace {

std::string_view stripLineEnd(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
  return line;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> splitSingleSpace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(' ', start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

template <typename T>
bool parseNumber(std::string_view text, T& value) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

std::ifstream openInput(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path.string() + "'", 0);
  return in;
}

std::ofstream openOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write '" + path.string() + "'", 0);
  return out;
}

}  // namespace

EmbeddingSpace parseEmbeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw LoadError("missing header line", 1);
  const auto header = splitSingleSpace(stripLineEnd(line));
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parseNumber(header[0], count) || !parseNumber(header[1], dim) ||
      dim == 0) {
    throw LoadError("malformed header, expected '<count> <dim>'", 1);
  }

  EmbeddingSpace space(dim);
  std::size_t lineNo = 1;
  std::size_t pendingBlank = 0;  // blank lines are only allowed at the end
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string_view body = stripLineEnd(line);
    if (body.empty()) {
      if (pendingBlank == 0) pendingBlank = lineNo;
      continue;
    }
    if (pendingBlank != 0) throw LoadError("blank line inside the entry list", pendingBlank);
    if (space.size() == count) {
      throw LoadError("more entries than the header count " + std::to_string(count), lineNo);
    }
    const auto fields = splitSingleSpace(body);
    if (fields.size() != dim + 1) {
      throw LoadError("expected a token and " + std::to_string(dim) + " components, found " +
                          std::to_string(fields.size() - 1) + " components",
                      lineNo);
    }
    const std::string token(fields[0]);
    if (token.empty()) throw LoadError("empty token", lineNo);
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parseNumber(fields[i + 1], v[i]) || !std::isfinite(v[i])) {
        throw LoadError("component " + std::to_string(i + 1) + " of '" + token +
                            "' is not a finite number",
                        lineNo);
      }
    }
    if (space.contains(token)) throw LoadError("duplicate token '" + token + "'", lineNo);
    if (norm(v) == 0.0) throw LoadError("token '" + token + "' is the zero vector", lineNo);
    space.add(token, std::move(v));
  }
  if (space.size() != count) {
    throw LoadError("line count mismatch: header declares " + std::to_string(count) +
                        " entries, file has " + std::to_string(space.size()),
                    lineNo + 1);
  }
  return space;
}

EmbeddingSpace loadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in = openInput(path);
  return parseEmbeddings(in);
}

void writeEmbeddings(std::ostream& out, const EmbeddingSpace& space) {
  out << space.size() << ' ' << space.dim() << '\n';
  char buf[32];
  for (const std::string& token : space.tokens()) {
    out << token;
    for (double x : space.at(token)) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

void saveEmbeddings(const std::filesystem::path& path, const EmbeddingSpace& space) {
  std::ofstream out = openOutput(path);
  writeEmbeddings(out, space);
}

// Wordlists

std::string_view toString(SectionKind kind) {
  switch (kind) {
    case SectionKind::Group:
      return "group";
    case SectionKind::Targets:
      return "targets";
    case SectionKind::Pairs:
      return "pairs";
  }
  return "unknown";
}

void WordlistConfig::add(WordlistSection section) {
  for (const auto& s : sections_) {
    if (s.kind == section.kind && s.name == section.name) {
      throw LoadError("duplicate section [" + std::string(toString(s.kind)) + ":" + s.name + "]", 0);
    }
  }
  if (section.tokens.empty()) {
    throw LoadError("section [" + std::string(toString(section.kind)) + ":" + section.name +
                        "] is empty",
                    0);
  }
  if (section.kind == SectionKind::Pairs && section.tokens.size() % 2 != 0) {
    throw LoadError("section [pairs:" + section.name + "] has an odd pair count (" +
                        std::to_string(section.tokens.size()) + " tokens)",
                    0);
  }
  sections_.push_back(std::move(section));
}

const WordlistSection& WordlistConfig::section(SectionKind kind, const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.kind == kind && s.name == name) return s;
  }
  throw InvalidParameterError("no section [" + std::string(toString(kind)) + ":" + name + "]");
}

std::vector<std::pair<std::string, std::string>> WordlistConfig::pairs(
    const std::string& name) const {
  const WordlistSection& s = section(SectionKind::Pairs, name);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i + 1 < s.tokens.size(); i += 2) out.emplace_back(s.tokens[i], s.tokens[i + 1]);
  return out;
}

WordlistConfig parseWordlists(std::istream& in) {
  WordlistConfig config;
  std::optional<WordlistSection> current;
  std::size_t currentLine = 0;
  auto flush = [&] {
    if (!current) return;
    try {
      config.add(std::move(*current));
    } catch (const LoadError& e) {
      throw LoadError(e.what(), currentLine);
    }
    current.reset();
  };

  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw LoadError("unterminated section header", lineNo);
      const std::string_view inner = line.substr(1, line.size() - 2);
      const auto colon = inner.find(':');
      if (colon == std::string_view::npos || colon + 1 >= inner.size()) {
        throw LoadError("section header must look like [kind:NAME]", lineNo);
      }
      const std::string_view kind = inner.substr(0, colon);
      WordlistSection section;
      if (kind == "group") {
        section.kind = SectionKind::Group;
      } else if (kind == "targets") {
        section.kind = SectionKind::Targets;
      } else if (kind == "pairs") {
        section.kind = SectionKind::Pairs;
      } else {
        throw LoadError("unknown section kind '" + std::string(kind) + "'", lineNo);
      }
      section.name = std::string(inner.substr(colon + 1));
      flush();
      current = std::move(section);
      currentLine = lineNo;
      continue;
    }
    if (!current) throw LoadError("token outside of any section", lineNo);
    if (line.find_first_of(" \t") != std::string_view::npos) {
      throw LoadError("one token per line expected", lineNo);
    }
    current->tokens.emplace_back(line);
  }
  flush();
  return config;
}

WordlistConfig loadWordlists(const std::filesystem::path& path) {
  std::ifstream in = openInput(path);
  return parseWordlists(in);
}

void writeWordlists(std::ostream& out, const WordlistConfig& config) {
  bool first = true;
  for (const auto& s : config.sections()) {
    if (!first) out << '\n';
    first = false;
    out << '[' << toString(s.kind) << ':' << s.name << "]\n";
    for (const auto& t : s.tokens) out << t << '\n';
  }
}

void saveWordlists(const std::filesystem::path& path, const WordlistConfig& config) {
  std::ofstream out = openOutput(path);
  writeWordlists(out, config);
}

VectorSet resolve(const EmbeddingSpace& space, const WordlistSection& section) {
  return space.gather(section.tokens);
}

DefiningSetFamily resolvePairs(const EmbeddingSpace& space, const WordlistConfig& config,
                               const std::string& name) {
  std::vector<VectorSet> sets;
  for (const auto& [first, second] : config.pairs(name)) {
    sets.push_back({space.at(first), space.at(second)});
  }
  return DefiningSetFamily::make(std::move(sets));
}

}  // namespace biasaudit::io
