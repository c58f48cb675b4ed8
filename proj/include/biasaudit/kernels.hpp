#pragma once

// Data-parallel inner loops. Each kernel comes as an OpenMP version and a
// serial reference with identical results; the reference is what the tests
// and benchmarks compare against.
//
// `workers` <= 0 means "OpenMP default".

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "biasaudit/core.hpp"

namespace biasaudit::kernels {

/// Per-target WEAT association differences s(t, A, B) for every target.
/// `unitA` and `unitB` must already be unit-normalized.
std::vector<double> associationDiffsSerial(const VectorSet& targets, const VectorSet& unitA,
                                           const VectorSet& unitB);
std::vector<double> associationDiffs(const VectorSet& targets, const VectorSet& unitA,
                                     const VectorSet& unitB, int workers = 0);

/// Test statistic of one bipartition: sum over `inFirst` minus the rest.
double partitionStatistic(std::span<const double> scores, std::span<const std::uint8_t> inFirst);

/// True when `statistic` strictly exceeds `observed`. Differences within
/// kStatisticTieTolerance * max(1, sum |s|) count as ties, so partitions that
/// are mathematically equal to the observed one never count.
constexpr double kStatisticTieTolerance = 1e-12;
double tieTolerance(std::span<const double> scores);

/// Number of m-of-2m bipartitions of `scores` (first m entries form the
/// observed X) whose statistic strictly exceeds `observed`.
std::uint64_t countExceedingExactSerial(std::span<const double> scores, std::size_t m,
                                        double observed);
std::uint64_t countExceedingExact(std::span<const double> scores, std::size_t m, double observed,
                                  int workers = 0);

/// Same, over `samples` uniformly drawn bipartitions. Sample i draws from a
/// generator keyed by (seed, i) only, so the count is independent of how the
/// samples are spread over workers.
std::uint64_t countExceedingSampledSerial(std::span<const double> scores, std::size_t m,
                                          double observed, std::uint64_t samples,
                                          std::uint64_t seed);
std::uint64_t countExceedingSampled(std::span<const double> scores, std::size_t m,
                                    double observed, std::uint64_t samples, std::uint64_t seed,
                                    int workers = 0);

/// Binomial coefficient; throws InvalidParameterError on uint64 overflow.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// splitmix64 finalizer, used to derive independent per-index seeds.
std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t index);

}  // namespace biasaudit::kernels
