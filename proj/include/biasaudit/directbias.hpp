#pragma once

// Direct Bias: mean |cos(w, g)|^c of neutral words against a bias direction,
// and its projection-norm extension to a k-dimensional bias subspace.

#include <variant>

#include "biasaudit/core.hpp"
#include "biasaudit/subspace.hpp"

namespace biasaudit {

/// Strictness c >= 0 plus either a single direction (stored unit-normalized)
/// or an orthonormal subspace.
class DirectBiasConfig {
 public:
  static DirectBiasConfig fromDirection(VectorView direction, double strictness);
  static DirectBiasConfig fromSubspace(BiasSubspace subspace, double strictness);

  double strictness() const noexcept { return strictness_; }
  bool usesSubspace() const noexcept { return std::holds_alternative<BiasSubspace>(basis_); }
  const Vector& direction() const { return std::get<Vector>(basis_); }
  const BiasSubspace& subspace() const { return std::get<BiasSubspace>(basis_); }

 private:
  DirectBiasConfig(std::variant<Vector, BiasSubspace> basis, double strictness)
      : basis_(std::move(basis)), strictness_(strictness) {}

  std::variant<Vector, BiasSubspace> basis_;
  double strictness_;
};

/// |x|^c with 0^c = 0 for every c, including c = 0, so an orthogonal word
/// scores as unbiased at every strictness.
double strictnessPower(double magnitude, double strictness);

/// |cos(t, g)|^c.
double directBiasWord(VectorView t, VectorView g, double strictness);

/// ||projection of t/||t|| onto the subspace||^c. Equals directBiasWord for k = 1.
double directBiasSubspace(VectorView t, const BiasSubspace& subspace, double strictness);

/// Per-word score under `cfg`.
double directBiasWord(VectorView t, const DirectBiasConfig& cfg);

/// Mean per-word score over a nonempty set of neutral words.
double directBiasSet(const VectorSet& words, const DirectBiasConfig& cfg);

}  // namespace biasaudit
