// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Tolerances are fixed; nothing here is tuned per run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biasaudit/audit.hpp"
#include "biasaudit/cli.hpp"
#include "biasaudit/directbias.hpp"
#include "biasaudit/errors.hpp"
#include "biasaudit/subspace.hpp"
#include "biasaudit/weat.hpp"
#include "test_support.hpp"

using namespace biasaudit;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// 1 ------------------------------------------------------------------------
Outcome effectSizeBound() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::size_t used = 0, discarded = 0;
  double worst = 0.0;
  while (used < 1000) {
    const std::size_t dim = uniform(rng, 2, 50), m = uniform(rng, 1, 8), na = uniform(rng, 1, 8);
    const auto inst = WeatInstance::make(TargetSet::make("X", testsupport::randomSet(rng, m, dim)),
                                         TargetSet::make("Y", testsupport::randomSet(rng, m, dim)),
                                         testsupport::randomSet(rng, na, dim),
                                         testsupport::randomSet(rng, na, dim));
    try {
      worst = std::max(worst, std::abs(effectSize(inst)));
      ++used;
    } catch (const DegenerateDenominatorError&) {
      ++discarded;
    }
  }
  const double secs = secondsSince(start);
  return {worst <= 2.0 + 1e-9 && secs < 5.0,
          "max |d| " + fmt("%.12f", worst) + ", discarded " + std::to_string(discarded) + ", " +
              fmt("%.2f", secs) + " s"};
}

// 2 ------------------------------------------------------------------------
Outcome extremalCertificate() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const std::size_t dim = uniform(rng, 2, 50), na = uniform(rng, 1, 8), m = uniform(rng, 1, 8);
    const auto a = testsupport::randomSet(rng, na, dim);
    const auto b = testsupport::randomSet(rng, na, dim);
    worst = std::max(worst, std::abs(effectSize(constructWeatExtremal(m, a, b)) - 2.0));
  }
  return {worst <= 1e-9, "max |d - 2| " + fmt("%.3g", worst)};
}

// 3 ------------------------------------------------------------------------
Outcome individualNonComparability() {
  double worst = 0.0;
  double ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t dim = 3 + 5 * seed;
    const auto [a1, b1] = attributesWithDifferenceNorm(0.2, dim, 100 + seed);
    const auto [a2, b2] = attributesWithDifferenceNorm(1.4, dim, 200 + seed);
    const double rho = attributeDifferenceNorm(a2, b2) / attributeDifferenceNorm(a1, b1);
    const auto lo = scoreExtrema(ScoreKind::WeatIndividual, a1, b1, 1, 300 + seed);
    const auto hi = scoreExtrema(ScoreKind::WeatIndividual, a2, b2, 1, 400 + seed);
    ratio = hi.empiricalMax / lo.empiricalMax;
    worst = std::max(worst, std::abs(ratio / rho - 1.0));
    worst = std::max(worst, std::abs((hi.empiricalMin / lo.empiricalMin) / rho - 1.0));
  }
  return {worst <= 0.01, "empirical max ratio " + fmt("%.6f", ratio) +
                             " vs rho 7, worst relative deviation " + fmt("%.2e", worst)};
}

// 4 ------------------------------------------------------------------------
Outcome individualTrustworthiness() {
  ProbeConfig cfg;
  cfg.trials = 10000;
  cfg.tolerance = 1e-9;
  cfg.seed = 4;
  const auto r = trustworthinessProbe(ScoreKind::WeatIndividual, cfg);
  return {r.witnessCount == 0, std::to_string(r.witnessCount) + " witnesses in " +
                                   std::to_string(r.trialsRun) + " trials (" +
                                   std::to_string(r.skippedTrials) + " skipped)"};
}

// 5 ------------------------------------------------------------------------
Outcome effectSizeNonTrustworthiness() {
  bool ok = true;
  std::string detail;
  for (std::size_t dim : {2u, 50u}) {
    const auto ce = constructWeatZeroBias(dim);
    const double d = effectSize(ce.instance);
    double maxS = 0.0;
    for (double s : targetScores(ce.instance)) maxS = std::max(maxS, std::abs(s));
    ok = ok && std::abs(d) <= 1e-9 && maxS >= 0.1;
    detail += "dim " + std::to_string(dim) + ": |d| " + fmt("%.2g", std::abs(d)) + ", max |s| " +
              fmt("%.6f", maxS) + "; ";
  }
  return {ok, detail};
}

// 6 ------------------------------------------------------------------------
struct DirectBiasFacts {
  Vector pc1;
  double neutral = 0, separating = 0;
  bool neutralUnbiased = false, separatingBiased = false;
  double assocA = 0, assocC = 0;
};

// 0.44721 is 1/sqrt(5) to five digits; the tolerance applies to the exact value.
const double kInvSqrt5 = 1.0 / std::sqrt(5.0);

bool directBiasFactsHold(const DirectBiasFacts& f, std::string& detail) {
  const bool pcOk = f.pc1.size() >= 2 && std::abs(std::abs(f.pc1[1]) - 1.0) <= 1e-9 &&
                    std::abs(f.pc1[0]) <= 1e-9;
  const bool ok = pcOk && std::abs(f.neutral - 1.0) <= 1e-9 && f.separating <= 1e-9 &&
                  f.neutralUnbiased && f.separatingBiased &&
                  std::abs(f.assocA + kInvSqrt5) <= 1e-6 && std::abs(f.assocC - kInvSqrt5) <= 1e-6;
  detail = "PC1 (" + fmt("%.3g", f.pc1[0]) + ", " + fmt("%.12g", f.pc1[1]) + "), DB(0,1) " +
           fmt("%.12g", f.neutral) + ", DB(1,0) " + fmt("%.3g", f.separating) +
           ", s((1,0),A) " + fmt("%.6f", f.assocA) + ", s((1,0),C) " + fmt("%.6f", f.assocC) +
           ", verdicts " + (f.neutralUnbiased ? "unbiased" : "BIASED") + "/" +
           (f.separatingBiased ? "biased" : "UNBIASED");
  return ok;
}

Outcome directBiasNonTrustworthiness() {
  const auto ce = constructDirectBiasCounterexample(2.0, 1.0);
  const auto sub = pca(centeredSamples(ce.family), 1);
  DirectBiasFacts f;
  f.pc1 = sub.components.front();
  f.neutral = directBiasWord(ce.neutralTarget, f.pc1, 1.0);
  f.separating = directBiasWord(ce.separatingTarget, f.pc1, 1.0);
  f.neutralUnbiased = individualBias(ce.neutralTarget, ce.groups) == BiasVerdict::Unbiased;
  f.separatingBiased = individualBias(ce.separatingTarget, ce.groups) == BiasVerdict::Biased;
  f.assocA = groupAssociation(ce.separatingTarget, ce.groups.groups[0]);
  f.assocC = groupAssociation(ce.separatingTarget, ce.groups.groups[1]);
  std::string detail;
  const bool ok = directBiasFactsHold(f, detail);
  return {ok, detail};
}

// 7 ------------------------------------------------------------------------
Outcome directBiasRange() {
  std::mt19937_64 rng(7);
  double lo = 1.0, hi = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t dim = uniform(rng, 2, 50);
    const auto words = testsupport::randomSet(rng, uniform(rng, 1, 20), dim);
    const auto g = testsupport::randomVec(rng, dim);
    for (double c : {0.5, 1.0, 2.0}) {
      const double b = directBiasSet(words, DirectBiasConfig::fromDirection(g, c));
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
  }
  return {lo >= -1e-12 && hi <= 1.0 + 1e-12,
          "scores within [" + fmt("%.6g", lo) + ", " + fmt("%.12g", hi) + "]"};
}

// 8 ------------------------------------------------------------------------
Outcome projectionIdentity() {
  std::mt19937_64 rng(8);
  double worst = 0.0;
  int used = 0;
  while (used < 1000) {
    const std::size_t dim = uniform(rng, 2, 50);
    const auto a = testsupport::randomSet(rng, uniform(rng, 1, 8), dim);
    const auto b = testsupport::randomSet(rng, uniform(rng, 1, 8), dim);
    const auto t = testsupport::randomVec(rng, dim);
    Vector diff = normalizedMean(a);
    const Vector bh = normalizedMean(b);
    for (std::size_t i = 0; i < dim; ++i) diff[i] -= bh[i];
    if (norm(diff) < 1e-9) continue;
    ++used;
    const double rhs = testsupport::naiveCos(t, diff) * norm(diff);
    worst = std::max(worst, std::abs(associationDiff(t, a, b) - rhs));
  }
  return {worst <= 1e-9, "max deviation " + fmt("%.3g", worst)};
}

// 9 ------------------------------------------------------------------------
Outcome standardizedSumBound() {
  const auto start = Clock::now();
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  double worstExcess = -1e300;
  for (int rep = 0; rep < 100000; ++rep) {
    const std::size_t n = uniform(rng, 2, 10);
    std::vector<double> v(n);
    for (auto& x : v) x = gauss(rng);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(uniform(rng, 1, n - 1));
    const auto c = lemmaCheck(v, idx);
    worstExcess = std::max(worstExcess, std::abs(c.standardizedSum) - c.bound);
  }
  double equalityGap = 0.0, numericExcess = -1e300;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (std::size_t m = 1; m < n; ++m) {
      std::vector<std::size_t> sel(m);
      for (std::size_t i = 0; i < m; ++i) sel[i] = i;
      for (int sign : {1, -1}) {
        const auto c = lemmaCheck(lemmaEqualityConfiguration(n, m, sign, 0.7, 1.3), sel);
        equalityGap = std::max(equalityGap, std::abs(std::abs(c.standardizedSum) - c.bound));
      }
      numericExcess = std::max(numericExcess,
                               lemmaNumericalMaximum(n, m, 1000, 90 + n * 16 + m) - lemmaBound(n, m));
    }
  }
  const double secs = secondsSince(start);
  return {worstExcess <= 1e-6 && equalityGap <= 1e-9 && numericExcess <= 1e-6 && secs < 30.0,
          "random excess " + fmt("%.3g", worstExcess) + ", equality gap " +
              fmt("%.3g", equalityGap) + ", maximizer excess " + fmt("%.3g", numericExcess) +
              ", " + fmt("%.2f", secs) + " s"};
}

// 10 -----------------------------------------------------------------------
Outcome permutationTests() {
  std::mt19937_64 rng(10);
  std::size_t exactMismatch = 0, outside = 0, notReproducible = 0;
  double worstZ = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t m = 1 + static_cast<std::size_t>(inst) % 6;
    const std::size_t dim = uniform(rng, 2, 20), na = uniform(rng, 1, 6);
    const auto w = WeatInstance::make(TargetSet::make("X", testsupport::randomSet(rng, m, dim)),
                                      TargetSet::make("Y", testsupport::randomSet(rng, m, dim)),
                                      testsupport::randomSet(rng, na, dim),
                                      testsupport::randomSet(rng, na, dim));
    std::vector<double> scores;
    for (const auto& t : w.x.members) scores.push_back(testsupport::naiveS(t, w.a, w.b));
    for (const auto& t : w.y.members) scores.push_back(testsupport::naiveS(t, w.a, w.b));
    const auto oracle = testsupport::enumeratePermutations(scores, m);
    const auto exact = permutationTest(w, ExactPermutation{});
    if (exact.exceeding != oracle.exceeding || exact.evaluated != oracle.total) ++exactMismatch;

    const MonteCarloPermutation mc{10000, 7};
    const auto one = permutationTest(w, mc, 1);
    const auto two = permutationTest(w, mc, 2);
    const auto eight = permutationTest(w, mc, 8);
    if (one.exceeding != two.exceeding || one.exceeding != eight.exceeding ||
        one.pValue != eight.pValue) {
      ++notReproducible;
    }
    const double p = exact.pValue;
    const double sd = std::sqrt(p * (1.0 - p) / 10000.0);
    const double diff = std::abs(one.pValue - p);
    if (diff > 3.0 * sd) ++outside;
    if (sd > 0) worstZ = std::max(worstZ, diff / sd);
  }
  return {exactMismatch == 0 && outside == 0 && notReproducible == 0,
          "exact mismatches " + std::to_string(exactMismatch) + ", Monte Carlo outside 3 sd " +
              std::to_string(outside) + " (max z " + fmt("%.2f", worstZ) +
              "), worker-dependent results " + std::to_string(notReproducible)};
}

// 11 -----------------------------------------------------------------------
Outcome pcaOracle() {
  std::mt19937_64 rng(11);
  double compErr = 0.0, ratioErr = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t dim = uniform(rng, 2, 10), count = uniform(rng, 1, 20);
    const auto samples = testsupport::randomSet(rng, count, dim);
    const std::size_t k = uniform(rng, 1, std::min(dim, count));
    const auto sub = pca(samples, k);
    const auto oracle = testsupport::oraclePca(samples, k);
    for (std::size_t c = 0; c < k; ++c) {
      ratioErr = std::max(ratioErr, std::abs(sub.explainedVarianceRatios[c] - oracle.ratios[c]));
      for (std::size_t i = 0; i < dim; ++i) {
        compErr = std::max(compErr, std::abs(sub.components[c][i] - oracle.components[c][i]));
      }
    }
  }
  return {compErr <= 1e-8 && ratioErr <= 1e-8,
          "max component error " + fmt("%.3g", compErr) + ", max ratio error " + fmt("%.3g", ratioErr)};
}

// 12 -----------------------------------------------------------------------
struct Pc1Cosines {
  std::vector<double> outliers;
  double medianCluster = 0.0;
};

Pc1Cosines pc1Cosines(const testsupport::DirectionFixture& f, std::size_t pairsUsed) {
  std::vector<VectorSet> sets(f.pairs.begin(), f.pairs.begin() + static_cast<long>(pairsUsed));
  const Vector pc1 = pca(centeredSamples(DefiningSetFamily::make(sets)), 1).components.front();
  Pc1Cosines out;
  std::vector<double> cluster;
  for (std::size_t i = 0; i < f.directions.size(); ++i) {
    const double c = std::abs(cosine(pc1, f.directions[i]));
    (i < f.clustered ? cluster : out.outliers).push_back(c);
  }
  std::sort(cluster.begin(), cluster.end());
  out.medianCluster = cluster[cluster.size() / 2];
  return out;
}

Outcome outlierPhenomenon() {
  const auto f = testsupport::directionFixture(23, 2, 3.0, 15.0, 10, 12);
  const auto with = pc1Cosines(f, f.pairs.size());
  const auto without = pc1Cosines(f, f.clustered);
  bool dominate = true, flipped = true;
  for (double c : with.outliers) dominate = dominate && c > with.medianCluster;
  for (double c : without.outliers) flipped = flipped && c < without.medianCluster;
  return {dominate && flipped,
          "with outliers: |cos(PC1, outlier)| " + fmt("%.4f", with.outliers[0]) + ", " +
              fmt("%.4f", with.outliers[1]) + " vs median " + fmt("%.4f", with.medianCluster) +
              "; without: " + fmt("%.4f", without.outliers[0]) + ", " +
              fmt("%.4f", without.outliers[1]) + " vs median " + fmt("%.4f", without.medianCluster)};
}

// 13 -----------------------------------------------------------------------
Json runCliJson(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::runCli(args, out, err);
  return out.str().empty() ? Json() : Json::parse(out.str());
}

Outcome endToEndReplay() {
  const fs::path root = fs::temp_directory_path() / "biasaudit_acceptance_replay";
  fs::remove_all(root);
  bool ok = true;
  std::string detail;
  int code = 0;

  for (int dim : {2, 50}) {
    const std::string dir = (root / ("weat-zero-" + std::to_string(dim))).string();
    runCliJson({"counterexample", "--kind", "weat-zero", "--dim", std::to_string(dim), "--out", dir}, code);
    ok = ok && code == 0;
    const Json j = runCliJson({"weat", "--embeddings", dir + "/embeddings.txt", "--wordlists",
                               dir + "/wordlists.txt", "--group-a", "A", "--group-b", "B",
                               "--targets-x", "X", "--targets-y", "Y"},
                              code);
    ok = ok && code == 0;
    double maxS = 0.0;
    for (const auto& s : j["scores"]) maxS = std::max(maxS, std::abs(s["s"].get<double>()));
    const double d = j["effect_size"].get<double>();
    ok = ok && std::abs(d) <= 1e-9 && maxS >= 0.1;
    detail += "weat dim " + std::to_string(dim) + ": d " + fmt("%.3g", d) + ", max |s| " +
              fmt("%.6f", maxS) + "; ";
  }

  const std::string dir = (root / "directbias").string();
  runCliJson({"counterexample", "--kind", "directbias", "--r", "2", "--out", dir}, code);
  ok = ok && code == 0;
  const Json j = runCliJson({"directbias", "--embeddings", dir + "/embeddings.txt", "--wordlists",
                             dir + "/wordlists.txt", "--pairs", "defining", "--neutral", "probes",
                             "--groups", "A,C"},
                            code);
  ok = ok && code == 0;
  DirectBiasFacts f;
  f.pc1 = j["principal_components"][0].get<std::vector<double>>();
  for (const auto& w : j["words"]) {
    if (w["token"] == "t_neutral") {
      f.neutral = w["direct_bias"].get<double>();
      f.neutralUnbiased = w["individual_bias"] == "unbiased";
    } else if (w["token"] == "t_biased") {
      f.separating = w["direct_bias"].get<double>();
      f.separatingBiased = w["individual_bias"] == "biased";
      f.assocA = w["group_associations"]["A"].get<double>();
      f.assocC = w["group_associations"]["C"].get<double>();
    }
  }
  std::string dbDetail;
  ok = directBiasFactsHold(f, dbDetail) && ok;
  fs::remove_all(root);
  return {ok, detail + "directbias: " + dbDetail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"effect size stays within [-2, 2] on 1000 random instances", effectSizeBound},
      {"extremal construction attains effect size 2", extremalCertificate},
      {"individual score extrema scale with the attribute difference norm", individualNonComparability},
      {"individual score is unbiased-trustworthy over 10^4 probe trials", individualTrustworthiness},
      {"effect size 0 with individually biased targets (dims 2, 50)", effectSizeNonTrustworthiness},
      {"Direct Bias 1 for an unbiased word, 0 for a biased word", directBiasNonTrustworthiness},
      {"Direct Bias stays within [0, 1]", directBiasRange},
      {"association difference equals projection on the mean difference", projectionIdentity},
      {"standardized-sum bound holds and is attained", standardizedSumBound},
      {"permutation test: exact vs enumeration, Monte Carlo accuracy and reproducibility", permutationTests},
      {"PCA agrees with a dense eigendecomposition oracle", pcaOracle},
      {"two 3x outlier pairs dominate PC1 among 23 clustered pairs", outlierPhenomenon},
      {"counterexample files replay through weat and directbias", endToEndReplay},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%2zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
