#include "biasaudit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <omp.h>

#include "biasaudit/errors.hpp"

namespace biasaudit::kernels {

namespace {

int resolveWorkers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

double associationDiffOne(const Vector& t, const VectorSet& unitA, const VectorSet& unitB) {
  const double tn = norm(t);
  if (tn == 0.0) throw DegenerateVectorError("zero-norm target");
  double sa = 0.0;
  for (const Vector& a : unitA) sa += dot(t, a);
  double sb = 0.0;
  for (const Vector& b : unitB) sb += dot(t, b);
  return sa / (tn * static_cast<double>(unitA.size())) -
         sb / (tn * static_cast<double>(unitB.size()));
}

// Statistic of the partition whose first set is the index combination `chosen`.
double combinationStatistic(std::span<const double> scores, std::span<const std::size_t> chosen,
                            std::vector<std::uint8_t>& mask) {
  std::fill(mask.begin(), mask.end(), std::uint8_t{0});
  for (std::size_t c : chosen) mask[c] = 1;
  return partitionStatistic(scores, mask);
}

// Lexicographic unranking of k-combinations of {0..n-1}.
std::vector<std::size_t> unrankCombination(std::uint64_t rank, std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t x = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (;; ++x) {
      const std::uint64_t count = binomial(n - x - 1, k - i - 1);
      if (rank < count) {
        out.push_back(x++);
        break;
      }
      rank -= count;
    }
  }
  return out;
}

bool nextCombination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void requireShape(std::span<const double> scores, std::size_t m) {
  if (m == 0 || scores.size() != 2 * m) {
    throw InvalidParameterError("permutation kernels need 2m scores with m >= 1");
  }
}

double sampleStatistic(std::span<const double> scores, std::size_t m, std::uint64_t seed,
                       std::uint64_t index, std::vector<std::size_t>& perm,
                       std::vector<std::uint8_t>& mask) {
  std::mt19937_64 rng(mixSeed(seed, index));
  const std::size_t n = scores.size();
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t j = 0; j < m; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, n - 1);
    std::swap(perm[j], perm[pick(rng)]);
  }
  return combinationStatistic(scores, std::span(perm).first(m), mask);
}

}  // namespace

std::vector<double> associationDiffsSerial(const VectorSet& targets, const VectorSet& unitA,
                                           const VectorSet& unitB) {
  std::vector<double> out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out[i] = associationDiffOne(targets[i], unitA, unitB);
  }
  return out;
}

std::vector<double> associationDiffs(const VectorSet& targets, const VectorSet& unitA,
                                     const VectorSet& unitB, int workers) {
  // Validate up front; exceptions must not escape an OpenMP region.
  for (const Vector& t : targets) {
    if (!unitA.empty() && t.size() != unitA.front().size()) {
      throw DimensionError("target dimension does not match attributes");
    }
    if (norm(t) == 0.0) throw DegenerateVectorError("zero-norm target");
  }
  std::vector<double> out(targets.size());
  const auto n = static_cast<std::int64_t>(targets.size());
#pragma omp parallel for schedule(static) num_threads(resolveWorkers(workers))
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = associationDiffOne(targets[i], unitA, unitB);
  }
  return out;
}

double partitionStatistic(std::span<const double> scores, std::span<const std::uint8_t> inFirst) {
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (inFirst[i]) {
      first += scores[i];
    } else {
      second += scores[i];
    }
  }
  return first - second;
}

double tieTolerance(std::span<const double> scores) {
  double mass = 0.0;
  for (double s : scores) mass += std::abs(s);
  return kStatisticTieTolerance * std::max(1.0, mass);
}

std::uint64_t countExceedingExactSerial(std::span<const double> scores, std::size_t m,
                                        double observed) {
  requireShape(scores, m);
  const double threshold = observed + tieTolerance(scores);
  std::vector<std::size_t> combo(m);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  std::vector<std::uint8_t> mask(scores.size());
  std::uint64_t count = 0;
  do {
    if (combinationStatistic(scores, combo, mask) > threshold) ++count;
  } while (nextCombination(combo, scores.size()));
  return count;
}

std::uint64_t countExceedingExact(std::span<const double> scores, std::size_t m, double observed,
                                  int workers) {
  requireShape(scores, m);
  const double threshold = observed + tieTolerance(scores);
  const std::size_t n = scores.size();
  const std::uint64_t total = binomial(n, m);
  const int threads = resolveWorkers(workers);
  const auto chunks = static_cast<std::int64_t>(
      std::min<std::uint64_t>(total, static_cast<std::uint64_t>(threads) * 8));
  std::uint64_t count = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : count) num_threads(threads)
  for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
    const std::uint64_t lo = total * static_cast<std::uint64_t>(chunk) / chunks;
    const std::uint64_t hi = total * static_cast<std::uint64_t>(chunk + 1) / chunks;
    if (lo == hi) continue;
    std::vector<std::size_t> combo = unrankCombination(lo, n, m);
    std::vector<std::uint8_t> mask(n);
    for (std::uint64_t r = lo; r < hi; ++r) {
      if (combinationStatistic(scores, combo, mask) > threshold) ++count;
      nextCombination(combo, n);
    }
  }
  return count;
}

std::uint64_t countExceedingSampledSerial(std::span<const double> scores, std::size_t m,
                                          double observed, std::uint64_t samples,
                                          std::uint64_t seed) {
  requireShape(scores, m);
  const double threshold = observed + tieTolerance(scores);
  std::vector<std::size_t> perm(scores.size());
  std::vector<std::uint8_t> mask(scores.size());
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    if (sampleStatistic(scores, m, seed, i, perm, mask) > threshold) ++count;
  }
  return count;
}

std::uint64_t countExceedingSampled(std::span<const double> scores, std::size_t m,
                                    double observed, std::uint64_t samples, std::uint64_t seed,
                                    int workers) {
  requireShape(scores, m);
  const double threshold = observed + tieTolerance(scores);
  const auto total = static_cast<std::int64_t>(samples);
  std::uint64_t count = 0;
#pragma omp parallel num_threads(resolveWorkers(workers)) reduction(+ : count)
  {
    std::vector<std::size_t> perm(scores.size());
    std::vector<std::uint8_t> mask(scores.size());
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      if (sampleStatistic(scores, m, seed, static_cast<std::uint64_t>(i), perm, mask) >
          threshold) {
        ++count;
      }
    }
  }
  return count;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t numerator = n - k + i;
    // result * numerator / i is exact at every step; guard the multiply.
    if (result > std::numeric_limits<std::uint64_t>::max() / numerator) {
      throw InvalidParameterError("binomial coefficient overflows 64 bits");
    }
    result = result * numerator / i;
  }
  return result;
}

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace biasaudit::kernels
