// Witness builders, witness revalidation and the randomized probes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

#include <omp.h>

#include "audit_internal.hpp"
#include "biasaudit/audit.hpp"
#include "biasaudit/directbias.hpp"
#include "biasaudit/errors.hpp"
#include "biasaudit/kernels.hpp"

namespace biasaudit {

namespace detail {

Vector randomVector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vector v(dim);
  do {
    for (double& x : v) x = gauss(rng);
  } while (norm(v) < 1e-6);
  return v;
}

VectorSet randomVectorSet(std::size_t count, std::size_t dim, std::mt19937_64& rng) {
  VectorSet out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(randomVector(dim, rng));
  return out;
}

std::pair<Vector, Vector> randomOrthonormalPair(std::size_t dim, std::mt19937_64& rng) {
  Vector u = unit(randomVector(dim, rng));
  Vector v;
  do {
    v = orthogonalTo(randomVector(dim, rng), u);
  } while (norm(v) < 1e-6);
  return {u, unit(v)};
}

Vector orthogonalTo(VectorView v, VectorView g) {
  const Vector gu = unit(g);
  Vector out(v.begin(), v.end());
  for (int pass = 0; pass < 2; ++pass) {
    const double p = dot(out, gu);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= p * gu[i];
  }
  return out;
}

Vector reflect(VectorView v, VectorView w) {
  const double p = 2.0 * dot(v, w);
  Vector out(v.begin(), v.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= p * w[i];
  return out;
}

std::pair<double, double> populationMoments(const std::vector<double>& values) {
  double mu = 0.0;
  for (double v : values) mu += v;
  mu /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return {mu, std::sqrt(ss / static_cast<double>(values.size()))};
}

namespace {

void addRole(BiasWitness& w, const std::string& role, const VectorSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    w.vectors.push_back({role + ":" + std::to_string(i), set[i]});
  }
}

std::size_t countBiasedTargets(const WeatInstance& inst, double eps) {
  const AttributeGroups groups = AttributeGroups::make({"A", "B"}, {inst.a, inst.b});
  return aggregatedBias(inst.x, groups, eps).biasedMembers.size() +
         aggregatedBias(inst.y, groups, eps).biasedMembers.size();
}

}  // namespace

BiasWitness effectSizeWitness(const WeatInstance& inst, WitnessKind kind, std::string description,
                              double tolerance) {
  BiasWitness w;
  w.kind = kind;
  w.score = ScoreKind::WeatEffectSize;
  w.description = std::move(description);
  w.tolerance = tolerance;
  addRole(w, "x", inst.x.members);
  addRole(w, "y", inst.y.members);
  addRole(w, "a", inst.a);
  addRole(w, "b", inst.b);
  w.scores.push_back({"effect_size", effectSize(inst)});
  const std::size_t m = inst.targetsPerSet();
  for (std::size_t i = 0; i < m; ++i) {
    w.scores.push_back({"s(x:" + std::to_string(i) + ")", associationDiff(inst.x.members[i], inst.a, inst.b)});
  }
  for (std::size_t i = 0; i < m; ++i) {
    w.scores.push_back({"s(y:" + std::to_string(i) + ")", associationDiff(inst.y.members[i], inst.a, inst.b)});
  }
  w.scores.push_back({"biased_targets", static_cast<double>(countBiasedTargets(inst, tolerance))});
  return w;
}

BiasWitness directBiasWitness(const VectorSet& groupA, const VectorSet& groupC,
                              const Vector& zeroTarget, const std::optional<Vector>& oneTarget,
                              double strictness, WitnessKind kind, std::string description,
                              double tolerance) {
  std::vector<VectorSet> pairs;
  for (std::size_t i = 0; i < groupA.size(); ++i) pairs.push_back({groupA[i], groupC[i]});
  const BiasSubspace sub = pca(centeredSamples(DefiningSetFamily::make(std::move(pairs))), 1);
  const Vector& pc1 = sub.components.front();

  BiasWitness w;
  w.kind = kind;
  w.score = ScoreKind::DirectBias;
  w.description = std::move(description);
  w.tolerance = tolerance;
  addRole(w, "a", groupA);
  addRole(w, "c", groupC);
  w.vectors.push_back({"t:zero", zeroTarget});
  if (oneTarget) w.vectors.push_back({"t:one", *oneTarget});
  w.vectors.push_back({"pc1", pc1});

  w.scores.push_back({"strictness", strictness});
  w.scores.push_back({"pc1_explained_variance_ratio", sub.explainedVarianceRatios.front()});
  w.scores.push_back({"direct_bias(t:zero)", directBiasWord(zeroTarget, pc1, strictness)});
  w.scores.push_back({"s(t:zero,A)", groupAssociation(zeroTarget, groupA)});
  w.scores.push_back({"s(t:zero,C)", groupAssociation(zeroTarget, groupC)});
  if (oneTarget) {
    w.scores.push_back({"direct_bias(t:one)", directBiasWord(*oneTarget, pc1, strictness)});
    w.scores.push_back({"s(t:one,A)", groupAssociation(*oneTarget, groupA)});
    w.scores.push_back({"s(t:one,C)", groupAssociation(*oneTarget, groupC)});
  }
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Revalidation

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool hasVector(const BiasWitness& w, std::string_view name) {
  return std::any_of(w.vectors.begin(), w.vectors.end(),
                     [&](const NamedVector& v) { return v.name == name; });
}

bool revalidateEffectSize(const BiasWitness& w) {
  const double tol = w.tolerance;
  const WeatInstance inst = WeatInstance::make(TargetSet::make("X", w.role("x")),
                                               TargetSet::make("Y", w.role("y")), w.role("a"),
                                               w.role("b"));
  const double d = effectSize(inst);
  if (!near(d, w.scoreValue("effect_size"), tol)) return false;
  for (std::size_t i = 0; i < inst.targetsPerSet(); ++i) {
    const std::string idx = std::to_string(i);
    if (!near(associationDiff(inst.x.members[i], inst.a, inst.b), w.scoreValue("s(x:" + idx + ")"), tol) ||
        !near(associationDiff(inst.y.members[i], inst.a, inst.b), w.scoreValue("s(y:" + idx + ")"), tol)) {
      return false;
    }
  }
  if (w.kind == WitnessKind::TrustworthinessViolation) {
    const AttributeGroups groups = AttributeGroups::make({"A", "B"}, {inst.a, inst.b});
    const bool biased = aggregatedBias(inst.x, groups, tol).verdict == BiasVerdict::Biased ||
                        aggregatedBias(inst.y, groups, tol).verdict == BiasVerdict::Biased;
    return std::abs(d) <= tol && biased;
  }
  return near(std::abs(d), 2.0, tol);
}

bool revalidateDirectBias(const BiasWitness& w) {
  const double tol = w.tolerance;
  const VectorSet groupA = w.role("a");
  const VectorSet groupC = w.role("c");
  std::vector<VectorSet> pairs;
  for (std::size_t i = 0; i < groupA.size(); ++i) pairs.push_back({groupA[i], groupC[i]});
  const BiasSubspace sub = pca(centeredSamples(DefiningSetFamily::make(std::move(pairs))), 1);
  const Vector& pc1 = sub.components.front();
  const double c = w.scoreValue("strictness");
  const AttributeGroups groups = AttributeGroups::make({"A", "C"}, {groupA, groupC});

  const Vector& zero = w.vector("t:zero");
  const double dbZero = directBiasWord(zero, pc1, c);
  if (!near(dbZero, w.scoreValue("direct_bias(t:zero)"), tol)) return false;
  if (!near(groupAssociation(zero, groupA), w.scoreValue("s(t:zero,A)"), tol) ||
      !near(groupAssociation(zero, groupC), w.scoreValue("s(t:zero,C)"), tol)) {
    return false;
  }
  if (dbZero > tol) return false;
  const bool trust = w.kind == WitnessKind::TrustworthinessViolation;
  if (trust && individualBias(zero, groups, tol) != BiasVerdict::Biased) return false;

  if (hasVector(w, "t:one")) {
    const Vector& one = w.vector("t:one");
    const double dbOne = directBiasWord(one, pc1, c);
    if (!near(dbOne, w.scoreValue("direct_bias(t:one)"), tol) || !near(dbOne, 1.0, tol)) {
      return false;
    }
    if (trust && individualBias(one, groups, tol) != BiasVerdict::Unbiased) return false;
  } else if (!trust) {
    return false;
  }
  return true;
}

bool revalidateIndividual(const BiasWitness& w) {
  const double tol = w.tolerance;
  if (w.kind == WitnessKind::ComparabilityEvidence) {
    const double first = attributeDifferenceNorm(w.role("a"), w.role("b"));
    const double second = attributeDifferenceNorm(w.role("a2"), w.role("b2"));
    return near(first, w.scoreValue("max(draw1)"), tol) &&
           near(second, w.scoreValue("max(draw2)"), tol) && std::abs(first - second) > tol;
  }
  const VectorSet a = w.role("a");
  const VectorSet b = w.role("b");
  const Vector& t = w.vector("t:probe");
  const double s = associationDiff(t, a, b);
  if (!near(s, w.scoreValue("s"), tol)) return false;
  const AttributeGroups groups = AttributeGroups::make({"A", "B"}, {a, b});
  const bool atZero = std::abs(s) <= tol;
  const bool biased = individualBias(t, groups, tol) == BiasVerdict::Biased;
  return atZero == biased;
}

bool revalidateLemma(const BiasWitness& w) {
  const std::vector<double>& values = w.vector("values");
  std::vector<std::size_t> selection;
  for (double idx : w.vector("selection")) selection.push_back(static_cast<std::size_t>(idx));
  const LemmaCheck check = lemmaCheck(values, selection);
  return near(check.standardizedSum, w.scoreValue("standardized_sum"), w.tolerance) &&
         near(std::abs(check.standardizedSum), check.bound, w.tolerance);
}

}  // namespace

bool revalidate(const BiasWitness& witness) {
  try {
    if (witness.kind == WitnessKind::LemmaEquality) return revalidateLemma(witness);
    switch (witness.score) {
      case ScoreKind::WeatEffectSize:
        return revalidateEffectSize(witness);
      case ScoreKind::DirectBias:
        return revalidateDirectBias(witness);
      case ScoreKind::WeatIndividual:
        return revalidateIndividual(witness);
    }
  } catch (const Error&) {
    return false;
  }
  return false;
}

BiasWitness lemmaWitness(const std::vector<double>& values, std::size_t m) {
  std::vector<std::size_t> selection(m);
  for (std::size_t i = 0; i < m; ++i) selection[i] = i;
  const LemmaCheck check = lemmaCheck(values, selection);
  BiasWitness w;
  w.kind = WitnessKind::LemmaEquality;
  w.score = ScoreKind::WeatEffectSize;
  w.description = "standardized sum of the first m values attains sqrt(m (n - m))";
  w.vectors.push_back({"values", values});
  w.vectors.push_back({"selection", Vector(selection.begin(), selection.end())});
  w.scores.push_back({"standardized_sum", check.standardizedSum});
  w.scores.push_back({"bound", check.bound});
  return w;
}

// ---------------------------------------------------------------------------
// Probes

void ProbeConfig::validate() const {
  if (trials < 1) throw InvalidParameterError("probe needs at least one trial");
  if (dimension < 2) throw InvalidParameterError("probe needs dimension >= 2");
  if (!(tolerance > 0.0)) throw InvalidParameterError("probe tolerance must be positive");
}

namespace {

constexpr std::size_t kRestarts = 6;
constexpr std::size_t kRefineSteps = 120;

using Objective = std::function<double(const Vector&)>;

// Random-perturbation hill climb; returns the best value and leaves the best
// point in `x`.
double refine(const Objective& f, Vector& x, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  double best = f(x);
  double step = 0.5;
  Vector candidate(x.size());
  for (std::size_t it = 0; it < kRefineSteps; ++it) {
    for (std::size_t i = 0; i < x.size(); ++i) candidate[i] = x[i] + step * gauss(rng);
    const double value = f(candidate);
    if (value > best) {
      best = value;
      x = candidate;
      step = std::min(2.0, step * 1.5);
    } else {
      step = std::max(1e-6, step * 0.85);
    }
  }
  return best;
}

// Best max and min of f over the seeds and random restarts in `dim` params.
std::pair<double, double> searchExtrema(const Objective& f, const VectorSet& seeds,
                                        std::size_t dim, std::mt19937_64& rng) {
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (const Vector& s : seeds) {
    const double v = f(s);
    if (std::isfinite(v)) {
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
  }
  const Objective negated = [&](const Vector& x) { return -f(x); };
  for (std::size_t r = 0; r < kRestarts; ++r) {
    Vector up = detail::randomVector(dim, rng);
    hi = std::max(hi, refine(f, up, rng));
    Vector down = detail::randomVector(dim, rng);
    lo = std::min(lo, -refine(negated, down, rng));
  }
  return {hi, lo};
}

double guarded(const std::function<double()>& f) {
  try {
    return f();
  } catch (const Error&) {
    return -std::numeric_limits<double>::infinity();
  }
}

Vector flatten(const VectorSet& set) {
  Vector out;
  for (const Vector& v : set) out.insert(out.end(), v.begin(), v.end());
  return out;
}

VectorSet unflatten(const Vector& flat, std::size_t dim) {
  VectorSet out;
  for (std::size_t i = 0; i + dim <= flat.size(); i += dim) {
    out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i),
                     flat.begin() + static_cast<std::ptrdiff_t>(i + dim));
  }
  return out;
}

Vector firstPrincipalDirection(const VectorSet& a, const VectorSet& b) {
  std::vector<VectorSet> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) pairs.push_back({a[i], b[i]});
  return pca(centeredSamples(DefiningSetFamily::make(std::move(pairs))), 1).components.front();
}

struct AttributeDraw {
  VectorSet a;
  VectorSet b;
  std::size_t targetsPerSet = 1;
};

AttributeDraw drawAttributes(ScoreKind score, const ProbeConfig& cfg, std::size_t trial,
                             std::mt19937_64& rng) {
  rng.seed(kernels::mixSeed(cfg.seed, trial));
  const std::size_t minSize = score == ScoreKind::DirectBias ? 2 : 1;
  std::uniform_int_distribution<std::size_t> sizes(minSize, 4);
  AttributeDraw d;
  const std::size_t k = sizes(rng);
  d.a = detail::randomVectorSet(k, cfg.dimension, rng);
  d.b = detail::randomVectorSet(k, cfg.dimension, rng);
  d.targetsPerSet = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  return d;
}

}  // namespace

ExtremaRecord scoreExtrema(ScoreKind score, const VectorSet& a, const VectorSet& b,
                           std::size_t targetsPerSet, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t dim = a.front().size();
  ExtremaRecord rec;
  rec.attributeDifferenceNorm = attributeDifferenceNorm(a, b);

  switch (score) {
    case ScoreKind::WeatIndividual: {
      const Vector g = subtract(normalizedMean(a), normalizedMean(b));
      const Objective f = [&](const Vector& t) { return guarded([&] { return associationDiff(t, a, b); }); };
      VectorSet seeds;
      if (norm(g) > 0.0) seeds = {g, scaled(g, -1.0)};
      std::tie(rec.empiricalMax, rec.empiricalMin) = searchExtrema(f, seeds, dim, rng);
      rec.expectedMax = rec.attributeDifferenceNorm;
      rec.expectedMin = -rec.attributeDifferenceNorm;
      break;
    }
    case ScoreKind::WeatEffectSize: {
      const std::size_t m = targetsPerSet;
      const Objective f = [&](const Vector& flat) {
        return guarded([&] {
          VectorSet all = unflatten(flat, dim);
          VectorSet y(all.begin() + static_cast<std::ptrdiff_t>(m), all.end());
          all.resize(m);
          return effectSize(WeatInstance::make(TargetSet::make("X", std::move(all)),
                                               TargetSet::make("Y", std::move(y)), a, b));
        });
      };
      const WeatInstance extremal = constructWeatExtremal(m, a, b);
      VectorSet forward = extremal.x.members;
      forward.insert(forward.end(), extremal.y.members.begin(), extremal.y.members.end());
      VectorSet backward = extremal.y.members;
      backward.insert(backward.end(), extremal.x.members.begin(), extremal.x.members.end());
      std::tie(rec.empiricalMax, rec.empiricalMin) =
          searchExtrema(f, {flatten(forward), flatten(backward)}, 2 * m * dim, rng);
      rec.expectedMax = 2.0;
      rec.expectedMin = -2.0;
      break;
    }
    case ScoreKind::DirectBias: {
      const Vector g = firstPrincipalDirection(a, b);
      const Objective f = [&](const Vector& t) { return guarded([&] { return directBiasWord(t, g, 1.0); }); };
      Vector orth;
      do {
        orth = detail::orthogonalTo(detail::randomVector(dim, rng), g);
      } while (norm(orth) < 1e-6);
      std::tie(rec.empiricalMax, rec.empiricalMin) = searchExtrema(f, {g, orth}, dim, rng);
      rec.expectedMax = 1.0;
      rec.expectedMin = 0.0;
      break;
    }
  }
  return rec;
}

ComparabilityReport comparabilityProbe(ScoreKind score, const ProbeConfig& cfg) {
  cfg.validate();
  ComparabilityReport report;
  report.score = score;
  report.config = cfg;

  std::vector<std::optional<ExtremaRecord>> results(cfg.trials);
  const auto trials = static_cast<std::int64_t>(cfg.trials);
  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng;
    const AttributeDraw draw = drawAttributes(score, cfg, static_cast<std::size_t>(t), rng);
    try {
      ExtremaRecord rec = scoreExtrema(score, draw.a, draw.b, draw.targetsPerSet,
                                       kernels::mixSeed(cfg.seed ^ 0xC0FFEEULL, static_cast<std::uint64_t>(t)));
      rec.trial = static_cast<std::size_t>(t);
      results[static_cast<std::size_t>(t)] = rec;
    } catch (const Error&) {
      // Degenerate draw (identical or cancelling normalized means).
    }
  }

  std::optional<std::size_t> lowTrial, highTrial;
  double hiMax = -std::numeric_limits<double>::infinity(), loMax = std::numeric_limits<double>::infinity();
  double hiMin = -std::numeric_limits<double>::infinity(), loMin = std::numeric_limits<double>::infinity();
  report.extremaMatchExpected = true;
  for (const auto& r : results) {
    if (!r) {
      ++report.skippedDraws;
      continue;
    }
    report.records.push_back(*r);
    if (!near(r->empiricalMax, r->expectedMax, cfg.tolerance) ||
        !near(r->empiricalMin, r->expectedMin, cfg.tolerance)) {
      report.extremaMatchExpected = false;
    }
    if (r->empiricalMax > hiMax) {
      hiMax = r->empiricalMax;
      highTrial = r->trial;
    }
    if (r->empiricalMax < loMax) {
      loMax = r->empiricalMax;
      lowTrial = r->trial;
    }
    hiMin = std::max(hiMin, r->empiricalMin);
    loMin = std::min(loMin, r->empiricalMin);
  }
  if (report.records.empty()) {
    report.extremaMatchExpected = false;
    return report;
  }
  report.maxSpread = std::max(hiMax - loMax, hiMin - loMin);
  report.extremaIndependentOfAttributes = report.maxSpread <= cfg.tolerance;

  // One replayable witness per probe.
  std::mt19937_64 rng;
  const std::size_t first = report.records.front().trial;
  switch (score) {
    case ScoreKind::WeatIndividual: {
      if (lowTrial && highTrial && *lowTrial != *highTrial) {
        const AttributeDraw low = drawAttributes(score, cfg, *lowTrial, rng);
        const AttributeDraw high = drawAttributes(score, cfg, *highTrial, rng);
        BiasWitness w;
        w.kind = WitnessKind::ComparabilityEvidence;
        w.score = score;
        w.description = "attainable maximum of s(t,A,B) differs between two attribute draws";
        w.tolerance = cfg.tolerance;
        for (std::size_t i = 0; i < low.a.size(); ++i) w.vectors.push_back({"a:" + std::to_string(i), low.a[i]});
        for (std::size_t i = 0; i < low.b.size(); ++i) w.vectors.push_back({"b:" + std::to_string(i), low.b[i]});
        for (std::size_t i = 0; i < high.a.size(); ++i) w.vectors.push_back({"a2:" + std::to_string(i), high.a[i]});
        for (std::size_t i = 0; i < high.b.size(); ++i) w.vectors.push_back({"b2:" + std::to_string(i), high.b[i]});
        w.scores.push_back({"max(draw1)", attributeDifferenceNorm(low.a, low.b)});
        w.scores.push_back({"max(draw2)", attributeDifferenceNorm(high.a, high.b)});
        report.witnesses.push_back(std::move(w));
      }
      break;
    }
    case ScoreKind::WeatEffectSize: {
      const AttributeDraw d = drawAttributes(score, cfg, first, rng);
      report.witnesses.push_back(detail::effectSizeWitness(
          constructWeatExtremal(d.targetsPerSet, d.a, d.b), WitnessKind::Extremal,
          "X = m copies of a^ - b^, Y = their negation: effect size 2", cfg.tolerance));
      break;
    }
    case ScoreKind::DirectBias: {
      const AttributeDraw d = drawAttributes(score, cfg, first, rng);
      const Vector g = firstPrincipalDirection(d.a, d.b);
      Vector orth;
      do {
        orth = detail::orthogonalTo(detail::randomVector(cfg.dimension, rng), g);
      } while (norm(orth) < 1e-6);
      report.witnesses.push_back(detail::directBiasWitness(
          d.a, d.b, orth, g, 1.0, WitnessKind::Extremal,
          "targets along and orthogonal to the first principal component reach 1 and 0",
          cfg.tolerance));
      break;
    }
  }
  return report;
}

namespace {

std::optional<BiasWitness> trustTrialIndividual(const ProbeConfig& cfg, std::size_t trial) {
  std::mt19937_64 rng(kernels::mixSeed(cfg.seed, trial));
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  const VectorSet a = detail::randomVectorSet(k, cfg.dimension, rng);
  const VectorSet b = detail::randomVectorSet(k, cfg.dimension, rng);
  Vector t = detail::randomVector(cfg.dimension, rng);
  if (trial % 2 == 1) {
    // Force s(t, A, B) to (numerically) zero: remove the a^ - b^ component.
    const Vector g = subtract(normalizedMean(a), normalizedMean(b));
    if (norm(g) == 0.0) return std::nullopt;
    t = detail::orthogonalTo(t, g);
    if (norm(t) < 1e-6) return std::nullopt;
  }
  const double s = associationDiff(t, a, b);
  const AttributeGroups groups = AttributeGroups::make({"A", "B"}, {a, b});
  const bool atZero = std::abs(s) <= cfg.tolerance;
  const bool biased = individualBias(t, groups, cfg.tolerance) == BiasVerdict::Biased;
  if (atZero != biased) return std::nullopt;

  BiasWitness w;
  w.kind = WitnessKind::TrustworthinessViolation;
  w.score = ScoreKind::WeatIndividual;
  w.description = atZero ? "s(t,A,B) = 0 for a biased target" : "s(t,A,B) != 0 for an unbiased target";
  w.tolerance = cfg.tolerance;
  w.vectors.push_back({"t:probe", t});
  for (std::size_t i = 0; i < k; ++i) w.vectors.push_back({"a:" + std::to_string(i), a[i]});
  for (std::size_t i = 0; i < k; ++i) w.vectors.push_back({"b:" + std::to_string(i), b[i]});
  w.scores.push_back({"s", s});
  return w;
}

// Replaces `target` by the reflection of `source` that is closest to it while
// keeping s(., A, B) equal to s(source, A, B).
Vector matchAssociation(const Vector& source, const Vector& target, const Vector& g) {
  Vector w = detail::orthogonalTo(subtract(source, target), g);
  if (norm(w) < 1e-12) return source;
  return detail::reflect(source, unit(w));
}

std::optional<BiasWitness> trustTrialEffectSize(const ProbeConfig& cfg, std::size_t trial) {
  if (trial == 0) return constructWeatZeroBias(cfg.dimension).witness;
  std::mt19937_64 rng(kernels::mixSeed(cfg.seed, trial));
  std::normal_distribution<double> gauss;

  VectorSet x, y, a, b;
  if (trial % 2 == 1) {
    // Closed-form geometry with t2, t4 perturbed by ~1% and equal association
    // re-imposed on t4.
    const WeatZeroBias base = constructWeatZeroBias(cfg.dimension);
    a = base.instance.a;
    b = base.instance.b;
    Vector t2 = base.instance.x.members[1];
    Vector t4 = base.instance.y.members[1];
    for (double& v : t2) v += 0.01 * gauss(rng);
    for (double& v : t4) v += 0.01 * gauss(rng);
    const Vector g = subtract(normalizedMean(a), normalizedMean(b));
    t4 = matchAssociation(t2, t4, g);
    x = {base.instance.x.members[0], t2};
    y = {base.instance.y.members[0], t4};
  } else {
    // Random attributes; t3 and t4 are reflections of t1 and t2 across
    // hyperplanes containing a^ - b^.
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    a = detail::randomVectorSet(k, cfg.dimension, rng);
    b = detail::randomVectorSet(k, cfg.dimension, rng);
    const Vector g = subtract(normalizedMean(a), normalizedMean(b));
    if (norm(g) < 1e-9) return std::nullopt;
    const Vector t1 = detail::randomVector(cfg.dimension, rng);
    const Vector t2 = detail::randomVector(cfg.dimension, rng);
    const Vector t3 = matchAssociation(t1, detail::randomVector(cfg.dimension, rng), g);
    const Vector t4 = matchAssociation(t2, detail::randomVector(cfg.dimension, rng), g);
    x = {t1, t2};
    y = {t3, t4};
  }
  const WeatInstance inst =
      WeatInstance::make(TargetSet::make("X", x), TargetSet::make("Y", y), a, b);
  double d = 0.0;
  try {
    d = effectSize(inst);
  } catch (const DegenerateDenominatorError&) {
    return std::nullopt;
  }
  if (std::abs(d) > cfg.tolerance) return std::nullopt;
  BiasWitness w = detail::effectSizeWitness(inst, WitnessKind::TrustworthinessViolation,
                                            "effect size 0 while targets are individually biased",
                                            cfg.tolerance);
  if (w.scoreValue("biased_targets") < 1.0) return std::nullopt;
  return w;
}

std::optional<BiasWitness> trustTrialDirectBias(const ProbeConfig& cfg, std::size_t trial) {
  if (trial == 0) return constructDirectBiasCounterexample(2.0, 1.0, cfg.dimension).witness;
  std::mt19937_64 rng(kernels::mixSeed(cfg.seed, trial));
  std::normal_distribution<double> gauss;
  const double r = std::uniform_real_distribution<double>(1.2, 3.0)(rng);
  const double x = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
  const auto [u, v] = detail::randomOrthonormalPair(cfg.dimension, rng);
  auto place = [&](double cu, double cv) {
    Vector out(cfg.dimension);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = cu * u[i] + cv * v[i] + 0.01 * x * gauss(rng);
    }
    return out;
  };
  const VectorSet groupA = {place(-x, r * x), place(-x, -r * x)};
  const VectorSet groupC = {place(x, -r * x), place(x, r * x)};
  const Vector pc1 = firstPrincipalDirection(groupA, groupC);
  const Vector zero = detail::orthogonalTo(u, pc1);
  if (norm(zero) < 1e-6) return std::nullopt;
  BiasWitness w = detail::directBiasWitness(
      groupA, groupC, zero, std::nullopt, 1.0, WitnessKind::TrustworthinessViolation,
      "Direct Bias 0 for a target orthogonal to the first principal component that is "
      "individually biased",
      cfg.tolerance);
  if (w.scoreValue("direct_bias(t:zero)") > cfg.tolerance) return std::nullopt;
  const AttributeGroups groups = AttributeGroups::make({"A", "C"}, {groupA, groupC});
  if (individualBias(zero, groups, cfg.tolerance) != BiasVerdict::Biased) return std::nullopt;
  return w;
}

}  // namespace

TrustworthinessReport trustworthinessProbe(ScoreKind score, const ProbeConfig& cfg) {
  cfg.validate();
  TrustworthinessReport report;
  report.score = score;
  report.config = cfg;

  enum class Outcome : std::uint8_t { NoWitness, Witness, Skipped };
  std::vector<Outcome> outcomes(cfg.trials, Outcome::NoWitness);
  std::vector<std::optional<BiasWitness>> found(cfg.trials);
  const auto trials = static_cast<std::int64_t>(cfg.trials);
  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto trial = static_cast<std::size_t>(t);
    try {
      std::optional<BiasWitness> w;
      switch (score) {
        case ScoreKind::WeatIndividual:
          w = trustTrialIndividual(cfg, trial);
          break;
        case ScoreKind::WeatEffectSize:
          w = trustTrialEffectSize(cfg, trial);
          break;
        case ScoreKind::DirectBias:
          w = trustTrialDirectBias(cfg, trial);
          break;
      }
      if (w) {
        outcomes[trial] = Outcome::Witness;
        found[trial] = std::move(w);
      }
    } catch (const Error&) {
      outcomes[trial] = Outcome::Skipped;
    }
  }

  report.trialsRun = cfg.trials;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    if (outcomes[t] == Outcome::Skipped) ++report.skippedTrials;
    if (outcomes[t] != Outcome::Witness) continue;
    ++report.witnessCount;
    if (report.witnesses.size() < cfg.maxStoredWitnesses) report.witnesses.push_back(std::move(*found[t]));
  }
  return report;
}

}  // namespace biasaudit
