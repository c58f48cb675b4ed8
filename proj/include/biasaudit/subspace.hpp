#pragma once

// Bias directions from defining sets: centering, PCA, per-pair directions and
// the pairwise direction correlation matrix.

#include <cstddef>
#include <optional>
#include <vector>

#include "biasaudit/core.hpp"

namespace biasaudit {

/// Sets of words that differ only by group membership, e.g. {man, woman}.
struct DefiningSetFamily {
  std::vector<VectorSet> sets;

  /// Throws unless every set is nonempty and all vectors share one dimension.
  static DefiningSetFamily make(std::vector<VectorSet> sets);
  std::size_t dim() const noexcept;
};

struct BiasSubspace {
  VectorSet components;                         // orthonormal, strongest first
  std::vector<double> eigenvalues;              // sum of squared projections per component
  std::vector<double> explainedVarianceRatios;  // eigenvalue / total squared norm
  std::size_t sampleCount = 0;

  std::size_t dim() const noexcept { return components.empty() ? 0 : components.front().size(); }
};

/// w - mean(D_i) for every w in every D_i, family order preserved. Raw vectors
/// are centered; nothing is unit-normalized.
VectorSet centeredSamples(const DefiningSetFamily& family);

/// First k principal directions of already-centered samples (no further
/// centering). Each component is sign-fixed so that its largest-magnitude
/// entry is positive, lowest index winning ties.
BiasSubspace pca(const VectorSet& samples, std::size_t k);

/// Unit-normalized first - second for every two-member defining set.
VectorSet pairDirections(const DefiningSetFamily& family);

class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Pairwise cosines of the directions; `extra` (typically PC1) becomes the last
/// row and column. The diagonal is exactly 1.
SquareMatrix correlationMatrix(const VectorSet& directions,
                               const std::optional<Vector>& extra = std::nullopt);

/// Median of |cos| over the off-diagonal pairs of `directions`, 1 when there
/// are fewer than two directions.
double medianAbsolutePairwiseCosine(const VectorSet& directions);

/// Flips `v` so its largest-magnitude entry is positive (lowest index on ties).
void applySignRule(Vector& v);

}  // namespace biasaudit
