#pragma once

// Word Embedding Association Test: per-target association difference, effect
// size, test statistic and permutation test.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "biasaudit/core.hpp"

namespace biasaudit {

/// Two equally sized target sets and two equally sized attribute sets.
struct WeatInstance {
  TargetSet x;
  TargetSet y;
  VectorSet a;
  VectorSet b;

  /// Throws unless |X| = |Y| >= 1, |A| = |B| >= 1 and all vectors share a
  /// dimension with nonzero norm.
  static WeatInstance make(TargetSet x, TargetSet y, VectorSet a, VectorSet b);

  std::size_t targetsPerSet() const noexcept { return x.size(); }
  std::size_t dim() const noexcept { return a.front().size(); }
};

/// s(t, A, B) = s(t, A) - s(t, B).
double associationDiff(VectorView t, const VectorSet& a, const VectorSet& b);

/// ||normalizedMean(A) - normalizedMean(B)||, the largest |s(t, A, B)| any
/// target can reach for these attributes.
double attributeDifferenceNorm(const VectorSet& a, const VectorSet& b);

/// Association differences of X followed by Y, in member order.
std::vector<double> targetScores(const WeatInstance& inst, int workers = 0);

/// (mean_X s - mean_Y s) / population stddev over X u Y. Always in [-2, 2].
/// Throws DegenerateDenominatorError when the stddev vanishes.
double effectSize(const WeatInstance& inst);
double effectSizeFromScores(const std::vector<double>& scores, std::size_t m);

/// sum_X s - sum_Y s.
double testStatistic(const WeatInstance& inst);

/// Stddev at or below this is treated as zero.
constexpr double kDegenerateStddev = 1e-14;

/// Largest per-set size for which the exact test stays within 184,756
/// bipartitions.
constexpr std::size_t kMaxExactTargetsPerSet = 10;

struct ExactPermutation {};
struct MonteCarloPermutation {
  std::uint64_t count = 10000;
  std::uint64_t seed = 0;
};
using PermutationMode = std::variant<ExactPermutation, MonteCarloPermutation>;

struct PermutationResult {
  double pValue = 0.0;
  std::uint64_t exceeding = 0;  // partitions with statistic strictly above observed
  std::uint64_t evaluated = 0;  // C(2m, m) in exact mode, the sample count otherwise
  double observed = 0.0;
  PermutationMode mode;
};

/// Fraction of equal-size bipartitions (X_i, Y_i) of X u Y whose test
/// statistic strictly exceeds the observed one. Exact mode enumerates all
/// C(2m, m) ordered bipartitions including the identity; it refuses
/// m > kMaxExactTargetsPerSet. Monte Carlo results depend only on (count,
/// seed), never on `workers`.
PermutationResult permutationTest(const WeatInstance& inst, const PermutationMode& mode,
                                  int workers = 0);
PermutationResult permutationTestFromScores(const std::vector<double>& scores, std::size_t m,
                                            const PermutationMode& mode, int workers = 0);

/// Exact when the set size allows it, else Monte Carlo with 10,000 samples.
PermutationMode automaticPermutationMode(std::size_t targetsPerSet, std::uint64_t seed);

struct WeatResult {
  std::vector<double> perTargetScores;  // X then Y
  std::optional<double> effectSize;     // empty when the denominator vanished
  bool degenerate = false;
  double testStatistic = 0.0;
  double attributeDifferenceNorm = 0.0;
  std::optional<PermutationResult> permutation;
};

/// Computes every WEAT quantity; a vanishing denominator is reported through
/// `degenerate` rather than thrown.
WeatResult runWeat(const WeatInstance& inst, const std::optional<PermutationMode>& mode,
                   int workers = 0);

}  // namespace biasaudit
