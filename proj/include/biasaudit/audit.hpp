#pragma once

// Executable bias definitions, closed-form counterexamples and extremal
// constructions, the standardized-sum bound oracle, and randomized probes for
// extrema comparability and unbiased-trustworthiness.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "biasaudit/core.hpp"
#include "biasaudit/subspace.hpp"
#include "biasaudit/weat.hpp"

namespace biasaudit {

enum class ScoreKind { WeatIndividual, WeatEffectSize, DirectBias };

/// CLI spelling: weat-s, weat-d, directbias. Long forms weat-individual,
/// weat-effect-size and direct-bias are accepted on input.
std::string_view toString(ScoreKind kind);
ScoreKind parseScoreKind(std::string_view text);

constexpr double kDefaultBiasEpsilon = 1e-9;

// ---------------------------------------------------------------------------
// Bias predicates

enum class BiasVerdict { Unbiased, Biased };

/// Biased iff max_i s(t, A_i) - min_j s(t, A_j) > eps.
BiasVerdict individualBias(VectorView t, const AttributeGroups& groups,
                           double eps = kDefaultBiasEpsilon);

struct AggregatedBias {
  BiasVerdict verdict = BiasVerdict::Unbiased;
  std::vector<std::size_t> biasedMembers;  // indices into the target set
};

/// Biased iff any member is individually biased; averages never cancel.
AggregatedBias aggregatedBias(const TargetSet& targets, const AttributeGroups& groups,
                              double eps = kDefaultBiasEpsilon);

// ---------------------------------------------------------------------------
// Witnesses

enum class WitnessKind { TrustworthinessViolation, ComparabilityEvidence, LemmaEquality, Extremal };
std::string_view toString(WitnessKind kind);

struct NamedVector {
  std::string name;
  Vector values;
};

struct NamedValue {
  std::string name;
  double value = 0.0;
};

/// A replayable configuration. Vector names follow the role convention
/// "x:i", "y:i" (targets), "a:i", "b:i", "c:i" (attributes), "t:zero" /
/// "t:one" (probe targets) and "values" / "selection" for the lemma.
struct BiasWitness {
  WitnessKind kind = WitnessKind::TrustworthinessViolation;
  ScoreKind score = ScoreKind::WeatEffectSize;
  std::string description;
  std::vector<NamedVector> vectors;
  std::vector<NamedValue> scores;
  double tolerance = kDefaultBiasEpsilon;

  const Vector& vector(std::string_view name) const;
  double scoreValue(std::string_view name) const;
  /// All vectors whose name starts with `role` + ':', in stored order.
  VectorSet role(std::string_view role) const;
};

/// Recomputes every recorded score from the stored vectors and checks that the
/// recorded conflict (or attainment) still holds within the witness tolerance.
bool revalidate(const BiasWitness& witness);

// ---------------------------------------------------------------------------
// Constructions

struct WeatZeroBias {
  WeatInstance instance;
  BiasWitness witness;
};

/// X = {t1, t2}, Y = {t3, t4}, A = {a}, B = {b} with (a - b) orthogonal to
/// t1 - t3: the effect size is 0 while s(t1, A, B) = s(t3, A, B) = 1. The 2-D
/// geometry occupies the first two coordinates of a `dim`-space.
WeatZeroBias constructWeatZeroBias(std::size_t dim);

/// m copies of x = a^ - b^ in X and m copies of -x in Y, which drives the
/// effect size to +2 for any attributes with distinct nonzero normalized
/// means. Throws PreconditionError otherwise.
WeatInstance constructWeatExtremal(std::size_t m, const VectorSet& a, const VectorSet& b);

struct DirectBiasCounterexample {
  DefiningSetFamily family;  // D_i = {a_i, c_i}
  AttributeGroups groups;    // A = {a_1, a_2}, C = {c_1, c_2}
  Vector neutralTarget;      // (0, 1): equidistant to A and C, Direct Bias 1
  Vector separatingTarget;   // (1, 0): maximally separating, Direct Bias 0
  BiasWitness witness;
};

/// a_1 = (-x, rx) = -c_1, a_2 = (-x, -rx) = -c_2. For r > 1 the first
/// principal component is (0, 1). Throws PreconditionError for r <= 1 or
/// x <= 0. Embedded into `dim` >= 2 coordinates by zero padding.
DirectBiasCounterexample constructDirectBiasCounterexample(double r, double x,
                                                           std::size_t dim = 2);

/// Two single-member attribute sets of unit vectors whose normalized-mean
/// difference has the requested norm (0 < norm < 2), in a random plane of a
/// `dim`-space.
std::pair<VectorSet, VectorSet> attributesWithDifferenceNorm(double differenceNorm,
                                                             std::size_t dim, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Standardized-sum bound: |sum over any m of n values of (x - mean) / stddev|
// never exceeds sqrt(m (n - m)) (population stddev).

double lemmaBound(std::size_t n, std::size_t m);

/// Values attaining the bound with the first m indices selected; empirical
/// mean `mu` and population stddev `sigma`. Requires 0 < m < n, sign = +-1.
std::vector<double> lemmaEqualityConfiguration(std::size_t n, std::size_t m, int sign, double mu,
                                               double sigma);

struct LemmaCheck {
  double standardizedSum = 0.0;
  double bound = 0.0;
  bool satisfied = false;  // |sum| <= bound + 1e-9 * max(1, bound)
};

LemmaCheck lemmaCheck(const std::vector<double>& values, const std::vector<std::size_t>& selection);

/// Lemma-equality witness for `values` with the first m indices selected.
BiasWitness lemmaWitness(const std::vector<double>& values, std::size_t m);

/// Best |standardized sum| found by random restarts plus coordinate
/// refinement, with the first m of n values selected.
double lemmaNumericalMaximum(std::size_t n, std::size_t m, std::size_t restarts,
                             std::uint64_t seed, int workers = 0);

// ---------------------------------------------------------------------------
// Probes

struct ProbeConfig {
  std::size_t dimension = 10;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double tolerance = kDefaultBiasEpsilon;
  std::size_t maxStoredWitnesses = 16;
  int workers = 0;

  void validate() const;
};

/// Empirical and closed-form extrema of one score for one attribute draw.
struct ExtremaRecord {
  std::size_t trial = 0;
  double attributeDifferenceNorm = 0.0;
  double empiricalMax = 0.0;
  double empiricalMin = 0.0;
  double expectedMax = 0.0;
  double expectedMin = 0.0;
};

struct ComparabilityReport {
  ScoreKind score = ScoreKind::WeatIndividual;
  ProbeConfig config;
  std::vector<ExtremaRecord> records;
  std::size_t skippedDraws = 0;
  bool extremaMatchExpected = false;  // every record within tolerance of its closed form
  bool extremaIndependentOfAttributes = false;
  double maxSpread = 0.0;  // largest difference of empirical maxima across draws
  std::vector<BiasWitness> witnesses;
};

/// Searches each random attribute draw for the score's extrema over targets
/// (closed-form extremizers plus random restarts with local refinement).
ExtremaRecord scoreExtrema(ScoreKind score, const VectorSet& a, const VectorSet& b,
                           std::size_t targetsPerSet, std::uint64_t seed);

ComparabilityReport comparabilityProbe(ScoreKind score, const ProbeConfig& cfg);

struct TrustworthinessReport {
  ScoreKind score = ScoreKind::WeatIndividual;
  ProbeConfig config;
  std::size_t trialsRun = 0;
  std::size_t skippedTrials = 0;  // degenerate draws: no score defined
  std::size_t witnessCount = 0;
  std::vector<BiasWitness> witnesses;  // first config.maxStoredWitnesses found
};

/// Looks for configurations where the score reports no bias (or bias) while
/// the individual/aggregated bias predicate disagrees. Starts from the
/// closed-form counterexamples and continues with random perturbations.
TrustworthinessReport trustworthinessProbe(ScoreKind score, const ProbeConfig& cfg);

}  // namespace biasaudit
