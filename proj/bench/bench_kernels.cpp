// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>

#include "biasaudit/core.hpp"
#include "biasaudit/kernels.hpp"

namespace {

using biasaudit::Vector;
using biasaudit::VectorSet;
namespace k = biasaudit::kernels;

VectorSet randomUnits(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  VectorSet out(n, Vector(dim));
  for (auto& v : out) {
    for (auto& x : v) x = g(rng);
    v = biasaudit::unit(v);
  }
  return out;
}

std::vector<double> scores(std::size_t n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> s(n);
  for (auto& x : s) x = u(rng);
  return s;
}

double observed(const std::vector<double>& s) {
  double o = 0;
  for (std::size_t i = 0; i < s.size(); ++i) o += i < s.size() / 2 ? s[i] : -s[i];
  return o;
}

void BM_AssociationSerial(benchmark::State& st) {
  const auto t = randomUnits(static_cast<std::size_t>(st.range(0)), 300, 1);
  const auto a = randomUnits(25, 300, 2), b = randomUnits(25, 300, 3);
  for (auto _ : st) benchmark::DoNotOptimize(k::associationDiffsSerial(t, a, b));
}

void BM_AssociationParallel(benchmark::State& st) {
  const auto t = randomUnits(static_cast<std::size_t>(st.range(0)), 300, 1);
  const auto a = randomUnits(25, 300, 2), b = randomUnits(25, 300, 3);
  for (auto _ : st) benchmark::DoNotOptimize(k::associationDiffs(t, a, b));
}

void BM_ExactSerial(benchmark::State& st) {
  const auto m = static_cast<std::size_t>(st.range(0));
  const auto s = scores(2 * m);
  const double o = observed(s);
  for (auto _ : st) benchmark::DoNotOptimize(k::countExceedingExactSerial(s, m, o));
}

void BM_ExactParallel(benchmark::State& st) {
  const auto m = static_cast<std::size_t>(st.range(0));
  const auto s = scores(2 * m);
  const double o = observed(s);
  for (auto _ : st) benchmark::DoNotOptimize(k::countExceedingExact(s, m, o));
}

void BM_SampledSerial(benchmark::State& st) {
  const auto s = scores(40);
  const double o = observed(s);
  for (auto _ : st) benchmark::DoNotOptimize(k::countExceedingSampledSerial(s, 20, o, 10000, 1));
}

void BM_SampledParallel(benchmark::State& st) {
  const auto s = scores(40);
  const double o = observed(s);
  for (auto _ : st) benchmark::DoNotOptimize(k::countExceedingSampled(s, 20, o, 10000, 1));
}

}  // namespace

BENCHMARK(BM_AssociationSerial)->Arg(100)->Arg(2000);
BENCHMARK(BM_AssociationParallel)->Arg(100)->Arg(2000);
BENCHMARK(BM_ExactSerial)->Arg(6)->Arg(10);
BENCHMARK(BM_ExactParallel)->Arg(6)->Arg(10);
BENCHMARK(BM_SampledSerial);
BENCHMARK(BM_SampledParallel);

BENCHMARK_MAIN();
