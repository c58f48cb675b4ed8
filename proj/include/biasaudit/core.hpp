#pragma once

// Vector primitives, embedding storage and the group association score.

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace biasaudit {

using Vector = std::vector<double>;
using VectorSet = std::vector<Vector>;
using VectorView = std::span<const double>;

double dot(VectorView u, VectorView v);
double norm(VectorView v);

/// u - v. Throws DimensionError on mismatch.
Vector subtract(VectorView u, VectorView v);
Vector scaled(VectorView v, double factor);

/// v / ||v||. Throws DegenerateVectorError for the zero vector.
Vector unit(VectorView v);

/// Cosine similarity u.v / (||u|| ||v||), clamped to [-1, 1].
double cosine(VectorView u, VectorView v);

/// Mean of the unit-normalized members. May be the zero vector when members
/// cancel; callers that need a direction must check.
Vector normalizedMean(const VectorSet& set);

/// Mean cosine of `target` with each attribute of one group.
double groupAssociation(VectorView target, const VectorSet& group);

/// Appends zeros so that `v` has `dim` components (dim >= v.size()).
Vector zeroPadded(VectorView v, std::size_t dim);

/// Throws DimensionError / DegenerateVectorError unless every member has
/// `dim` components and nonzero norm. `what` names the set in messages.
void requireValidMembers(const VectorSet& set, std::size_t dim, const std::string& what);

/// Token -> vector mapping with a fixed dimension. Insertion order is kept so
/// that writing a space back out is deterministic.
class EmbeddingSpace {
 public:
  explicit EmbeddingSpace(std::size_t dim);

  /// Throws DimensionError, DegenerateVectorError, or InvalidParameterError
  /// for a duplicate token.
  void add(const std::string& token, Vector vector);

  bool contains(const std::string& token) const;
  /// Exact, case-sensitive lookup. Throws MissingTokenError.
  const Vector& at(const std::string& token) const;
  VectorSet gather(const std::vector<std::string>& tokens) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::vector<Vector> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// n >= 2 equally sized, positionally aligned attribute groups: member k of
/// every group is the counterpart of member k of every other group.
struct AttributeGroups {
  std::vector<std::string> names;
  std::vector<VectorSet> groups;

  /// Validates the invariants and throws on violation.
  static AttributeGroups make(std::vector<std::string> names, std::vector<VectorSet> groups);

  std::size_t count() const noexcept { return groups.size(); }
  std::size_t groupSize() const noexcept { return groups.empty() ? 0 : groups.front().size(); }
  std::size_t dim() const noexcept;
};

/// Named, nonempty set of target vectors. `tokens` is either empty or parallel
/// to `members`.
struct TargetSet {
  std::string name;
  VectorSet members;
  std::vector<std::string> tokens;

  static TargetSet make(std::string name, VectorSet members, std::vector<std::string> tokens = {});

  std::size_t size() const noexcept { return members.size(); }
  /// Token for member i, or "<name>[i]" when no tokens were recorded.
  std::string label(std::size_t i) const;
};

}  // namespace biasaudit
