#pragma once

// Embedding and wordlist file formats.
//
// Embeddings use the word2vec text format:
//
//   <count> <dim>
//   <token> <v1> ... <vdim>
//
// Fields are separated by single spaces; tokens are UTF-8 without spaces.
//
// Wordlists are line oriented:
//
//   # comment
//   [group:female]
//   she
//   woman
//   [pairs:gender]
//   he
//   she
//
// Section kinds are `group` (attribute set), `targets` (target set) and
// `pairs` (consecutive lines form a two-member defining set).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "biasaudit/core.hpp"
#include "biasaudit/subspace.hpp"

namespace biasaudit::io {

EmbeddingSpace parseEmbeddings(std::istream& in);
EmbeddingSpace loadEmbeddings(const std::filesystem::path& path);

/// Writes every vector with 17 significant digits so a reload is bit-exact.
void writeEmbeddings(std::ostream& out, const EmbeddingSpace& space);
void saveEmbeddings(const std::filesystem::path& path, const EmbeddingSpace& space);

enum class SectionKind { Group, Targets, Pairs };

struct WordlistSection {
  SectionKind kind = SectionKind::Group;
  std::string name;
  std::vector<std::string> tokens;
};

class WordlistConfig {
 public:
  /// Throws LoadError for duplicate names, empty sections or odd pair counts.
  void add(WordlistSection section);

  /// Throws InvalidParameterError unless a section of that kind and name exists.
  const WordlistSection& section(SectionKind kind, const std::string& name) const;
  const std::vector<WordlistSection>& sections() const noexcept { return sections_; }

  /// (first, second) token pairs of a pairs section.
  std::vector<std::pair<std::string, std::string>> pairs(const std::string& name) const;

 private:
  std::vector<WordlistSection> sections_;
};

std::string_view toString(SectionKind kind);

WordlistConfig parseWordlists(std::istream& in);
WordlistConfig loadWordlists(const std::filesystem::path& path);
void writeWordlists(std::ostream& out, const WordlistConfig& config);
void saveWordlists(const std::filesystem::path& path, const WordlistConfig& config);

/// Vectors of a group or targets section; every token must exist.
VectorSet resolve(const EmbeddingSpace& space, const WordlistSection& section);
/// Defining sets of a pairs section.
DefiningSetFamily resolvePairs(const EmbeddingSpace& space, const WordlistConfig& config,
                               const std::string& name);

}  // namespace biasaudit::io
