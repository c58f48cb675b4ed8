#include "biasaudit/core.hpp"

#include <algorithm>
#include <cmath>

#include "biasaudit/errors.hpp"

namespace biasaudit {

namespace {

void requireSameDim(VectorView u, VectorView v) {
  if (u.size() != v.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()));
  }
}

}  // namespace

double dot(VectorView u, VectorView v) {
  requireSameDim(u, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return sum;
}

double norm(VectorView v) {
  // Scaled accumulation keeps tiny and huge components from under/overflowing.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : v) {
    const double r = x / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

Vector subtract(VectorView u, VectorView v) {
  requireSameDim(u, v);
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - v[i];
  return out;
}

Vector scaled(VectorView v, double factor) {
  Vector out(v.begin(), v.end());
  for (double& x : out) x *= factor;
  return out;
}

Vector unit(VectorView v) {
  const double n = norm(v);
  if (n == 0.0) throw DegenerateVectorError("zero-norm vector has no direction");
  return scaled(v, 1.0 / n);
}

double cosine(VectorView u, VectorView v) {
  requireSameDim(u, v);
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw DegenerateVectorError("cosine of a zero-norm vector");
  const double c = dot(u, v) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

Vector normalizedMean(const VectorSet& set) {
  if (set.empty()) throw EmptyInputError("normalized mean of an empty set");
  const std::size_t dim = set.front().size();
  Vector mean(dim, 0.0);
  for (const Vector& v : set) {
    requireSameDim(mean, v);
    const double n = norm(v);
    if (n == 0.0) throw DegenerateVectorError("zero-norm member in normalized mean");
    for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i] / n;
  }
  for (double& x : mean) x /= static_cast<double>(set.size());
  return mean;
}

double groupAssociation(VectorView target, const VectorSet& group) {
  if (group.empty()) throw EmptyInputError("group association with an empty attribute set");
  double sum = 0.0;
  for (const Vector& a : group) sum += cosine(target, a);
  return sum / static_cast<double>(group.size());
}

Vector zeroPadded(VectorView v, std::size_t dim) {
  if (dim < v.size()) {
    throw DimensionError("cannot pad a " + std::to_string(v.size()) + "-vector down to " +
                         std::to_string(dim));
  }
  Vector out(dim, 0.0);
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

void requireValidMembers(const VectorSet& set, std::size_t dim, const std::string& what) {
  if (set.empty()) throw EmptyInputError(what + " is empty");
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].size() != dim) {
      throw DimensionError(what + "[" + std::to_string(i) + "] has dimension " +
                           std::to_string(set[i].size()) + ", expected " + std::to_string(dim));
    }
    if (norm(set[i]) == 0.0) {
      throw DegenerateVectorError(what + "[" + std::to_string(i) + "] is the zero vector");
    }
  }
}

// EmbeddingSpace

EmbeddingSpace::EmbeddingSpace(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidParameterError("embedding dimension must be positive");
}

void EmbeddingSpace::add(const std::string& token, Vector vector) {
  if (vector.size() != dim_) {
    throw DimensionError("token '" + token + "' has " + std::to_string(vector.size()) +
                         " components, expected " + std::to_string(dim_));
  }
  if (norm(vector) == 0.0) throw DegenerateVectorError("token '" + token + "' is the zero vector");
  if (index_.contains(token)) throw InvalidParameterError("duplicate token '" + token + "'");
  index_.emplace(token, vectors_.size());
  tokens_.push_back(token);
  vectors_.push_back(std::move(vector));
}

bool EmbeddingSpace::contains(const std::string& token) const { return index_.contains(token); }

const Vector& EmbeddingSpace::at(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) throw MissingTokenError(token);
  return vectors_[it->second];
}

VectorSet EmbeddingSpace::gather(const std::vector<std::string>& tokens) const {
  VectorSet out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(at(t));
  return out;
}

// AttributeGroups

AttributeGroups AttributeGroups::make(std::vector<std::string> names,
                                      std::vector<VectorSet> groups) {
  if (groups.size() < 2) throw InvalidParameterError("need at least two attribute groups");
  if (names.size() != groups.size()) {
    throw InvalidParameterError("attribute group names and sets differ in count");
  }
  const std::size_t size = groups.front().size();
  if (size == 0) throw EmptyInputError("attribute group '" + names.front() + "' is empty");
  const std::size_t dim = groups.front().front().size();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].size() != size) {
      throw DimensionError("attribute groups must have equal size: '" + names[i] + "' has " +
                           std::to_string(groups[i].size()) + ", expected " +
                           std::to_string(size));
    }
    requireValidMembers(groups[i], dim, "attribute group '" + names[i] + "'");
  }
  return AttributeGroups{std::move(names), std::move(groups)};
}

std::size_t AttributeGroups::dim() const noexcept {
  return groups.empty() || groups.front().empty() ? 0 : groups.front().front().size();
}

// TargetSet

TargetSet TargetSet::make(std::string name, VectorSet members, std::vector<std::string> tokens) {
  if (members.empty()) throw EmptyInputError("target set '" + name + "' is empty");
  requireValidMembers(members, members.front().size(), "target set '" + name + "'");
  if (!tokens.empty() && tokens.size() != members.size()) {
    throw InvalidParameterError("target set '" + name + "' has mismatched token labels");
  }
  return TargetSet{std::move(name), std::move(members), std::move(tokens)};
}

std::string TargetSet::label(std::size_t i) const {
  if (i < tokens.size()) return tokens[i];
  return name + "[" + std::to_string(i) + "]";
}

}  // namespace biasaudit
