// Bias predicates, witnesses, closed-form constructions and the
// standardized-sum bound.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <omp.h>

#include "audit_internal.hpp"
#include "biasaudit/audit.hpp"
#include "biasaudit/directbias.hpp"
#include "biasaudit/errors.hpp"
#include "biasaudit/kernels.hpp"

namespace biasaudit {

std::string_view toString(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::WeatIndividual:
      return "weat-s";
    case ScoreKind::WeatEffectSize:
      return "weat-d";
    case ScoreKind::DirectBias:
      return "directbias";
  }
  return "unknown";
}

ScoreKind parseScoreKind(std::string_view text) {
  if (text == "weat-s" || text == "weat-individual") return ScoreKind::WeatIndividual;
  if (text == "weat-d" || text == "weat-effect-size") return ScoreKind::WeatEffectSize;
  if (text == "directbias" || text == "direct-bias") return ScoreKind::DirectBias;
  throw InvalidParameterError("unknown score '" + std::string(text) +
                              "' (expected weat-s, weat-d or directbias)");
}

std::string_view toString(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::TrustworthinessViolation:
      return "trustworthiness-violation";
    case WitnessKind::ComparabilityEvidence:
      return "comparability-evidence";
    case WitnessKind::LemmaEquality:
      return "lemma-equality";
    case WitnessKind::Extremal:
      return "extremal";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Predicates

BiasVerdict individualBias(VectorView t, const AttributeGroups& groups, double eps) {
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (const VectorSet& g : groups.groups) {
    const double s = groupAssociation(t, g);
    hi = std::max(hi, s);
    lo = std::min(lo, s);
  }
  return hi - lo > eps ? BiasVerdict::Biased : BiasVerdict::Unbiased;
}

AggregatedBias aggregatedBias(const TargetSet& targets, const AttributeGroups& groups,
                              double eps) {
  AggregatedBias out;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (individualBias(targets.members[i], groups, eps) == BiasVerdict::Biased) {
      out.biasedMembers.push_back(i);
    }
  }
  if (!out.biasedMembers.empty()) out.verdict = BiasVerdict::Biased;
  return out;
}

// ---------------------------------------------------------------------------
// Witness accessors

const Vector& BiasWitness::vector(std::string_view name) const {
  for (const auto& v : vectors) {
    if (v.name == name) return v.values;
  }
  throw InvalidParameterError("witness has no vector '" + std::string(name) + "'");
}

double BiasWitness::scoreValue(std::string_view name) const {
  for (const auto& s : scores) {
    if (s.name == name) return s.value;
  }
  throw InvalidParameterError("witness has no score '" + std::string(name) + "'");
}

VectorSet BiasWitness::role(std::string_view role) const {
  VectorSet out;
  for (const auto& v : vectors) {
    if (v.name.size() > role.size() && v.name.compare(0, role.size(), role) == 0 &&
        v.name[role.size()] == ':') {
      out.push_back(v.values);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

WeatZeroBias constructWeatZeroBias(std::size_t dim) {
  if (dim < 2) throw InvalidParameterError("counterexample needs dimension >= 2");
  const double h = std::numbers::sqrt2 / 2.0;
  const Vector a = zeroPadded(Vector{1.0, 0.0}, dim);
  const Vector b = zeroPadded(Vector{0.0, 1.0}, dim);
  // a - b = (1, -1) is orthogonal to t1 - t3 = (1, 1); t2 and t4 sit on the
  // bisector where s = 0.
  const Vector t1 = zeroPadded(Vector{1.0, 0.0}, dim);
  const Vector t2 = zeroPadded(Vector{h, h}, dim);
  const Vector t3 = zeroPadded(Vector{0.0, -1.0}, dim);
  const Vector t4 = zeroPadded(Vector{-h, -h}, dim);

  WeatInstance inst = WeatInstance::make(TargetSet::make("X", {t1, t2}, {"t1", "t2"}),
                                         TargetSet::make("Y", {t3, t4}, {"t3", "t4"}), {a}, {b});
  return WeatZeroBias{inst, detail::effectSizeWitness(inst, WitnessKind::TrustworthinessViolation,
                                                      "effect size 0 although s(t1) = s(t3) != 0, "
                                                      "so t1 and t3 are individually biased",
                                                      kDefaultBiasEpsilon)};
}

WeatInstance constructWeatExtremal(std::size_t m, const VectorSet& a, const VectorSet& b) {
  if (m == 0) throw InvalidParameterError("extremal construction needs m >= 1");
  const Vector ahat = normalizedMean(a);
  const Vector bhat = normalizedMean(b);
  if (norm(ahat) == 0.0 || norm(bhat) == 0.0) {
    throw PreconditionError("an attribute set has a zero normalized mean");
  }
  const Vector x = subtract(ahat, bhat);
  if (norm(x) <= 1e-12) {
    throw PreconditionError("attribute sets have identical normalized means");
  }
  const Vector y = scaled(x, -1.0);
  return WeatInstance::make(TargetSet::make("X", VectorSet(m, x)), TargetSet::make("Y", VectorSet(m, y)),
                            a, b);
}

DirectBiasCounterexample constructDirectBiasCounterexample(double r, double x, std::size_t dim) {
  if (!(r > 1.0)) throw PreconditionError("direct bias counterexample needs r > 1");
  if (!(x > 0.0)) throw PreconditionError("direct bias counterexample needs x > 0");
  if (dim < 2) throw InvalidParameterError("counterexample needs dimension >= 2");
  const Vector a1 = zeroPadded(Vector{-x, r * x}, dim);
  const Vector a2 = zeroPadded(Vector{-x, -r * x}, dim);
  const Vector c1 = scaled(a1, -1.0);
  const Vector c2 = scaled(a2, -1.0);

  DirectBiasCounterexample out{
      DefiningSetFamily::make({{a1, c1}, {a2, c2}}),
      AttributeGroups::make({"A", "C"}, {{a1, a2}, {c1, c2}}),
      zeroPadded(Vector{0.0, 1.0}, dim),
      zeroPadded(Vector{1.0, 0.0}, dim),
      {},
  };
  out.witness = detail::directBiasWitness(
      {a1, a2}, {c1, c2}, out.separatingTarget, out.neutralTarget, 1.0,
      WitnessKind::TrustworthinessViolation,
      "Direct Bias is 1 for a target equidistant to both groups and 0 for a maximally "
      "separating target",
      kDefaultBiasEpsilon);
  return out;
}

std::pair<VectorSet, VectorSet> attributesWithDifferenceNorm(double differenceNorm,
                                                             std::size_t dim,
                                                             std::uint64_t seed) {
  if (!(differenceNorm > 0.0) || differenceNorm > 2.0) {
    throw InvalidParameterError("attribute difference norm must lie in (0, 2]");
  }
  if (dim < 2) throw InvalidParameterError("need dimension >= 2");
  std::mt19937_64 rng(seed);
  const auto [u, v] = detail::randomOrthonormalPair(dim, rng);
  const double half = std::asin(differenceNorm / 2.0);  // half the angle between a and b
  Vector a(dim), b(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    a[i] = std::cos(half) * u[i] + std::sin(half) * v[i];
    b[i] = std::cos(half) * u[i] - std::sin(half) * v[i];
  }
  return {VectorSet{a}, VectorSet{b}};
}

// ---------------------------------------------------------------------------
// Standardized-sum bound

double lemmaBound(std::size_t n, std::size_t m) {
  if (n == 0) throw InvalidParameterError("bound needs n >= 1");
  if (m > n) throw InvalidParameterError("selection size exceeds the number of values");
  return std::sqrt(static_cast<double>(m) * static_cast<double>(n - m));
}

std::vector<double> lemmaEqualityConfiguration(std::size_t n, std::size_t m, int sign, double mu,
                                               double sigma) {
  if (m == 0 || m >= n) throw InvalidParameterError("equality configuration needs 0 < m < n");
  if (sign != 1 && sign != -1) throw InvalidParameterError("sign must be +1 or -1");
  if (!(sigma > 0.0)) throw InvalidParameterError("sigma must be positive");
  const double nm = static_cast<double>(n - m);
  const double mm = static_cast<double>(m);
  const double selected = mu + sign * std::sqrt(nm / mm) * sigma;
  const double rest = mu - sign * std::sqrt(mm / nm) * sigma;
  std::vector<double> values(n, rest);
  std::fill_n(values.begin(), m, selected);
  return values;
}

LemmaCheck lemmaCheck(const std::vector<double>& values,
                      const std::vector<std::size_t>& selection) {
  const std::size_t n = values.size();
  if (n == 0) throw EmptyInputError("bound check needs values");
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t idx : selection) {
    if (idx >= n) throw InvalidParameterError("selection index out of range");
    if (seen[idx]) throw InvalidParameterError("selection indices must be distinct");
    seen[idx] = 1;
  }
  const auto [mu, sigma] = detail::populationMoments(values);
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (sigma <= 1e-14 * scale) throw DegenerateInputError("bound check needs values that are not all equal");
  LemmaCheck out;
  for (std::size_t idx : selection) out.standardizedSum += (values[idx] - mu) / sigma;
  out.bound = lemmaBound(n, selection.size());
  out.satisfied = std::abs(out.standardizedSum) <= out.bound + 1e-9 * std::max(1.0, out.bound);
  return out;
}

namespace {

double standardizedPrefixSum(const std::vector<double>& x, std::size_t m) {
  const auto [mu, sigma] = detail::populationMoments(x);
  if (sigma <= 1e-12) return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += (x[i] - mu) / sigma;
  return s;
}

}  // namespace

double lemmaNumericalMaximum(std::size_t n, std::size_t m, std::size_t restarts,
                             std::uint64_t seed, int workers) {
  if (m == 0 || m >= n) return 0.0;
  double best = 0.0;
  const auto total = static_cast<std::int64_t>(restarts);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) reduction(max : best) num_threads(threads)
  for (std::int64_t r = 0; r < total; ++r) {
    std::mt19937_64 rng(kernels::mixSeed(seed, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> gauss;
    std::vector<double> x(n);
    for (double& v : x) v = gauss(rng);
    // The objective is odd in x, so maximizing the signed sum from a random
    // start covers |sum| as well. It is also invariant under x -> a x + b, so
    // the iterate is re-standardized after every pass; otherwise the search
    // drifts towards a large mean with a tiny spread and rounding dominates.
    auto standardize = [&] {
      const auto [mu, sigma] = detail::populationMoments(x);
      for (double& v : x) v = (v - mu) / sigma;
    };
    standardize();
    double value = standardizedPrefixSum(x, m);
    double step = 0.5;
    for (int pass = 0; pass < 5000 && step > 1e-9; ++pass) {
      bool improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (double dir : {1.0, -1.0}) {
          const double saved = x[i];
          x[i] += dir * step;
          const double candidate = standardizedPrefixSum(x, m);
          if (candidate > value) {
            value = candidate;
            improved = true;
          } else {
            x[i] = saved;
          }
        }
      }
      standardize();
      value = standardizedPrefixSum(x, m);
      step = improved ? std::min(1.0, step * 1.5) : step * 0.5;
    }
    best = std::max(best, std::abs(value));
  }
  return best;
}

}  // namespace biasaudit
