#include "biasaudit/weat.hpp"

#include <cmath>
#include <numeric>

#include "biasaudit/errors.hpp"
#include "biasaudit/kernels.hpp"

namespace biasaudit {

namespace {

VectorSet unitMembers(const VectorSet& set) {
  VectorSet out;
  out.reserve(set.size());
  for (const Vector& v : set) out.push_back(unit(v));
  return out;
}

double mean(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

WeatInstance WeatInstance::make(TargetSet x, TargetSet y, VectorSet a, VectorSet b) {
  if (x.size() != y.size()) {
    throw DimensionError("target sets must have equal size: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
  }
  if (a.empty() || b.empty()) throw EmptyInputError("attribute sets must be nonempty");
  if (a.size() != b.size()) {
    throw DimensionError("attribute sets must have equal size: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
  const std::size_t dim = a.front().size();
  requireValidMembers(a, dim, "attribute set A");
  requireValidMembers(b, dim, "attribute set B");
  requireValidMembers(x.members, dim, "target set X");
  requireValidMembers(y.members, dim, "target set Y");
  return WeatInstance{std::move(x), std::move(y), std::move(a), std::move(b)};
}

double associationDiff(VectorView t, const VectorSet& a, const VectorSet& b) {
  return groupAssociation(t, a) - groupAssociation(t, b);
}

double attributeDifferenceNorm(const VectorSet& a, const VectorSet& b) {
  return norm(subtract(normalizedMean(a), normalizedMean(b)));
}

std::vector<double> targetScores(const WeatInstance& inst, int workers) {
  VectorSet targets = inst.x.members;
  targets.insert(targets.end(), inst.y.members.begin(), inst.y.members.end());
  return kernels::associationDiffs(targets, unitMembers(inst.a), unitMembers(inst.b), workers);
}

double effectSizeFromScores(const std::vector<double>& scores, std::size_t m) {
  if (m == 0 || scores.size() != 2 * m) {
    throw InvalidParameterError("effect size needs two equally sized, nonempty target sets");
  }
  const std::span<const double> all(scores);
  const double mu = mean(all);
  double ss = 0.0;
  for (double s : all) ss += (s - mu) * (s - mu);
  const double sigma = std::sqrt(ss / static_cast<double>(scores.size()));
  if (sigma <= kDegenerateStddev) {
    throw DegenerateDenominatorError(
        "effect size undefined: all targets have the same association difference", scores);
  }
  return (mean(all.first(m)) - mean(all.subspan(m))) / sigma;
}

double effectSize(const WeatInstance& inst) {
  return effectSizeFromScores(targetScores(inst), inst.targetsPerSet());
}

double testStatistic(const WeatInstance& inst) {
  double sx = 0.0;
  for (const Vector& t : inst.x.members) sx += associationDiff(t, inst.a, inst.b);
  double sy = 0.0;
  for (const Vector& t : inst.y.members) sy += associationDiff(t, inst.a, inst.b);
  return sx - sy;
}

PermutationResult permutationTestFromScores(const std::vector<double>& scores, std::size_t m,
                                            const PermutationMode& mode, int workers) {
  if (m == 0 || scores.size() != 2 * m) {
    throw InvalidParameterError("permutation test needs two equally sized, nonempty target sets");
  }
  std::vector<std::uint8_t> identity(2 * m, 0);
  std::fill_n(identity.begin(), m, std::uint8_t{1});
  PermutationResult result;
  result.mode = mode;
  result.observed = kernels::partitionStatistic(scores, identity);

  if (std::holds_alternative<ExactPermutation>(mode)) {
    if (m > kMaxExactTargetsPerSet) {
      throw InvalidParameterError("exact permutation test limited to " +
                                  std::to_string(kMaxExactTargetsPerSet) +
                                  " targets per set; use Monte Carlo sampling");
    }
    result.evaluated = kernels::binomial(2 * m, m);
    result.exceeding = kernels::countExceedingExact(scores, m, result.observed, workers);
  } else {
    const auto& mc = std::get<MonteCarloPermutation>(mode);
    if (mc.count == 0) throw InvalidParameterError("Monte Carlo sample count must be positive");
    result.evaluated = mc.count;
    result.exceeding =
        kernels::countExceedingSampled(scores, m, result.observed, mc.count, mc.seed, workers);
  }
  result.pValue = static_cast<double>(result.exceeding) / static_cast<double>(result.evaluated);
  return result;
}

PermutationResult permutationTest(const WeatInstance& inst, const PermutationMode& mode,
                                  int workers) {
  return permutationTestFromScores(targetScores(inst, workers), inst.targetsPerSet(), mode,
                                   workers);
}

PermutationMode automaticPermutationMode(std::size_t targetsPerSet, std::uint64_t seed) {
  if (targetsPerSet <= kMaxExactTargetsPerSet) return ExactPermutation{};
  return MonteCarloPermutation{10000, seed};
}

WeatResult runWeat(const WeatInstance& inst, const std::optional<PermutationMode>& mode,
                   int workers) {
  WeatResult result;
  result.perTargetScores = targetScores(inst, workers);
  const std::size_t m = inst.targetsPerSet();
  try {
    result.effectSize = effectSizeFromScores(result.perTargetScores, m);
  } catch (const DegenerateDenominatorError&) {
    result.degenerate = true;
  }
  std::vector<std::uint8_t> identity(2 * m, 0);
  std::fill_n(identity.begin(), m, std::uint8_t{1});
  result.testStatistic = kernels::partitionStatistic(result.perTargetScores, identity);
  result.attributeDifferenceNorm = attributeDifferenceNorm(inst.a, inst.b);
  if (mode) result.permutation = permutationTestFromScores(result.perTargetScores, m, *mode, workers);
  return result;
}

}  // namespace biasaudit
