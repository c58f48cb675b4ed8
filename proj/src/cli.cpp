#include "biasaudit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "biasaudit/audit.hpp"
#include "biasaudit/directbias.hpp"
#include "biasaudit/errors.hpp"
#include "biasaudit/io.hpp"
#include "biasaudit/report.hpp"
#include "biasaudit/subspace.hpp"
#include "biasaudit/weat.hpp"

namespace biasaudit::cli {

namespace fs = std::filesystem;
using report::Json;

namespace {

constexpr double kDefaultWarnThreshold = 0.3;

struct Inputs {
  std::string embeddings;
  std::string wordlists;
};

struct WeatOptions {
  Inputs in;
  std::string groupA, groupB, targetsX, targetsY;
  std::string permutations = "auto";
  std::uint64_t seed = 0;
  int workers = 0;
  std::string outDir;
};

struct DirectBiasOptions {
  Inputs in;
  std::string pairs, neutral, groups;
  double strictness = 1.0;
  std::size_t components = 1;
  double warnThreshold = kDefaultWarnThreshold;
  std::string outDir;
};

struct CorrelateOptions {
  Inputs in;
  std::string pairs;
  std::string outDir;
};

struct AttrDiffOptions {
  Inputs in;
  std::string groupA, groupB;
};

struct AuditOptions {
  std::string score;
  std::size_t dim = 10;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t maxWitnesses = 16;
  int workers = 0;
  std::string outDir;
};

struct CounterexampleOptions {
  std::string kind;
  double r = 2.0;
  double x = 1.0;
  std::size_t dim = 2;
  std::size_t m = 3;
  std::uint64_t seed = 0;
  std::string outDir;
};

/// Usage-category failure raised while interpreting flag values.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCategory::Usage, what) {}
};

struct Loaded {
  EmbeddingSpace space;
  io::WordlistConfig lists;
  Json digests;
};

Loaded load(const Inputs& in) {
  Loaded l{io::loadEmbeddings(in.embeddings), io::loadWordlists(in.wordlists), Json::object()};
  l.digests["embeddings"] = report::fileDigest(in.embeddings);
  l.digests["wordlists"] = report::fileDigest(in.wordlists);
  return l;
}

Json header(std::string_view command, std::span<const std::string> args) {
  Json j;
  j["tool"] = "biasaudit";
  j["report_version"] = 1;
  j["command"] = command;
  j["arguments"] = std::vector<std::string>(args.begin(), args.end());
  return j;
}

Json tokenSection(const io::WordlistSection& s) {
  Json j;
  j["name"] = s.name;
  j["tokens"] = s.tokens;
  return j;
}

fs::path prepareOut(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw LoadError("cannot create output directory '" + dir + "': " + ec.message(), 0);
  return p;
}

std::optional<PermutationMode> parsePermutations(const std::string& text, std::size_t m,
                                                 std::uint64_t seed) {
  if (text == "none") return std::nullopt;
  if (text == "auto") return automaticPermutationMode(m, seed);
  if (text == "exact") return ExactPermutation{};
  std::uint64_t count = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), count);
  if (ec != std::errc() || ptr != text.data() + text.size() || count == 0) {
    throw UsageError("--permutations expects auto, exact, none or a positive count, got '" +
                     text + "'");
  }
  return MonteCarloPermutation{count, seed};
}

Json permutationJson(const PermutationResult& p) {
  Json j;
  if (const auto* mc = std::get_if<MonteCarloPermutation>(&p.mode)) {
    j["mode"] = "monte-carlo";
    j["samples"] = mc->count;
    j["seed"] = mc->seed;
  } else {
    j["mode"] = "exact";
  }
  j["p_value"] = report::number(p.pValue);
  j["exceeding"] = p.exceeding;
  j["evaluated"] = p.evaluated;
  j["observed_statistic"] = report::number(p.observed);
  return j;
}

// ---------------------------------------------------------------------------

int runWeatCommand(const WeatOptions& o, std::span<const std::string> args, std::ostream& out,
                   std::ostream& err) {
  const Loaded l = load(o.in);
  const auto& a = l.lists.section(io::SectionKind::Group, o.groupA);
  const auto& b = l.lists.section(io::SectionKind::Group, o.groupB);
  const auto& x = l.lists.section(io::SectionKind::Targets, o.targetsX);
  const auto& y = l.lists.section(io::SectionKind::Targets, o.targetsY);

  const WeatInstance inst = WeatInstance::make(
      TargetSet::make(x.name, io::resolve(l.space, x), x.tokens),
      TargetSet::make(y.name, io::resolve(l.space, y), y.tokens), io::resolve(l.space, a),
      io::resolve(l.space, b));
  const auto mode = parsePermutations(o.permutations, inst.targetsPerSet(), o.seed);
  const WeatResult r = runWeat(inst, mode, o.workers);

  Json j = header("weat", args);
  j["inputs"] = l.digests;
  j["attributes"] = {{"a", tokenSection(a)}, {"b", tokenSection(b)}};
  j["targets"] = {{"x", tokenSection(x)}, {"y", tokenSection(y)}};

  Json scores = Json::array();
  std::vector<std::vector<std::string>> rows;
  const std::size_t m = inst.targetsPerSet();
  for (std::size_t i = 0; i < r.perTargetScores.size(); ++i) {
    const bool inX = i < m;
    const std::string& token = inX ? x.tokens[i] : y.tokens[i - m];
    const double s = r.perTargetScores[i];
    scores.push_back({{"set", inX ? "x" : "y"}, {"token", token}, {"s", report::number(s)}});
    rows.push_back({inX ? "x" : "y", std::to_string(inX ? i : i - m), token,
                    report::formatNumber(s)});
  }
  j["scores"] = std::move(scores);
  j["effect_size"] = r.effectSize ? report::number(*r.effectSize) : Json(nullptr);
  j["degenerate"] = r.degenerate;
  j["test_statistic"] = report::number(r.testStatistic);
  j["attribute_difference_norm"] = report::number(r.attributeDifferenceNorm);
  j["permutation"] = r.permutation ? permutationJson(*r.permutation) : Json(nullptr);

  Json warnings = Json::array();
  std::string degeneracy;
  if (r.attributeDifferenceNorm <= kDegenerateStddev) {
    degeneracy = "attribute sets have identical normalized means; every association difference is 0";
  } else if (r.degenerate) {
    degeneracy = "effect size undefined: all association differences are equal (zero variance)";
  }
  if (!degeneracy.empty()) warnings.push_back(degeneracy);
  j["warnings"] = std::move(warnings);

  if (!o.outDir.empty()) {
    const fs::path dir = prepareOut(o.outDir);
    report::saveJson(dir / "weat.json", j);
    std::ofstream csv(dir / "scores.csv", std::ios::binary);
    report::writeCsv(csv, {"set", "index", "token", "s"}, rows);
  }
  report::writeJson(out, j);
  if (!degeneracy.empty()) {
    err << "degenerate: " << degeneracy << '\n';
    return kExitDegenerate;
  }
  return kExitSuccess;
}

std::vector<std::string> splitComma(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(part);
  return parts;
}

int runDirectBiasCommand(const DirectBiasOptions& o, std::span<const std::string> args,
                         std::ostream& out) {
  const Loaded l = load(o.in);
  const DefiningSetFamily family = io::resolvePairs(l.space, l.lists, o.pairs);
  const auto& neutral = l.lists.section(io::SectionKind::Targets, o.neutral);
  const VectorSet words = io::resolve(l.space, neutral);

  std::optional<AttributeGroups> groups;
  if (!o.groups.empty()) {
    const auto names = splitComma(o.groups);
    if (names.size() < 2) throw UsageError("--groups expects at least two comma-separated names");
    std::vector<VectorSet> sets;
    for (const auto& n : names) sets.push_back(io::resolve(l.space, l.lists.section(io::SectionKind::Group, n)));
    groups = AttributeGroups::make(names, std::move(sets));
  }

  const BiasSubspace sub = pca(centeredSamples(family), o.components);
  const DirectBiasConfig cfg = DirectBiasConfig::fromSubspace(sub, o.strictness);
  const VectorSet dirs = pairDirections(family);
  const double median = medianAbsolutePairwiseCosine(dirs);

  Json j = header("directbias", args);
  j["inputs"] = l.digests;
  j["pairs"] = o.pairs;
  j["neutral"] = tokenSection(neutral);
  j["strictness"] = report::number(o.strictness);
  j["components"] = o.components;
  j["eigenvalues"] = report::numbers(sub.eigenvalues);
  j["explained_variance_ratios"] = report::numbers(sub.explainedVarianceRatios);
  Json comps = Json::array();
  for (const auto& c : sub.components) comps.push_back(report::numbers(c));
  j["principal_components"] = std::move(comps);

  Json perWord = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const double score = directBiasWord(words[i], cfg);
    Json w;
    w["token"] = neutral.tokens[i];
    w["direct_bias"] = report::number(score);
    std::vector<std::string> row{neutral.tokens[i], report::formatNumber(score)};
    if (groups) {
      Json assoc = Json::object();
      for (std::size_t g = 0; g < groups->count(); ++g) {
        const double s = groupAssociation(words[i], groups->groups[g]);
        assoc[groups->names[g]] = report::number(s);
        row.push_back(report::formatNumber(s));
      }
      const bool biased = individualBias(words[i], *groups) == BiasVerdict::Biased;
      w["group_associations"] = std::move(assoc);
      w["individual_bias"] = biased ? "biased" : "unbiased";
      row.emplace_back(biased ? "biased" : "unbiased");
    }
    perWord.push_back(std::move(w));
    rows.push_back(std::move(row));
  }
  j["words"] = std::move(perWord);
  j["direct_bias"] = report::number(directBiasSet(words, cfg));
  j["pair_direction_correlation"] = {{"pairs", dirs.size()},
                                     {"median_abs_cosine", report::number(median)},
                                     {"warn_threshold", report::number(o.warnThreshold)},
                                     {"low", median < o.warnThreshold}};

  Json warnings = Json::array();
  if (median < o.warnThreshold) {
    warnings.push_back("pair directions correlate weakly (median |cos| " +
                       report::formatNumber(median) + " < " +
                       report::formatNumber(o.warnThreshold) +
                       "); the principal components may not represent individual pair directions");
  }
  if (o.strictness == 0.0) {
    warnings.push_back("strictness 0 scores every non-orthogonal word as 1");
  }
  j["warnings"] = std::move(warnings);

  if (!o.outDir.empty()) {
    const fs::path dir = prepareOut(o.outDir);
    report::saveJson(dir / "directbias.json", j);
    std::vector<std::string> head{"token", "direct_bias"};
    if (groups) {
      for (const auto& n : groups->names) head.push_back("s(" + n + ")");
      head.emplace_back("individual_bias");
    }
    std::ofstream csv(dir / "words.csv", std::ios::binary);
    report::writeCsv(csv, head, rows);
  }
  report::writeJson(out, j);
  return kExitSuccess;
}

int runCorrelateCommand(const CorrelateOptions& o, std::span<const std::string> args,
                        std::ostream& out) {
  const Loaded l = load(o.in);
  const DefiningSetFamily family = io::resolvePairs(l.space, l.lists, o.pairs);
  const auto pairTokens = l.lists.pairs(o.pairs);
  const VectorSet dirs = pairDirections(family);
  const BiasSubspace sub = pca(centeredSamples(family), 1);
  const SquareMatrix corr = correlationMatrix(dirs, sub.components.front());

  std::vector<std::string> labels;
  for (const auto& [first, second] : pairTokens) labels.push_back(first + "-" + second);
  labels.emplace_back("PC1");
  std::vector<std::string> head{"direction"};
  head.insert(head.end(), labels.begin(), labels.end());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    std::vector<std::string> row{labels[i]};
    for (std::size_t k = 0; k < corr.size(); ++k) row.push_back(report::formatNumber(corr(i, k)));
    rows.push_back(std::move(row));
  }

  if (!o.outDir.empty()) {
    const fs::path dir = prepareOut(o.outDir);
    std::ofstream csv(dir / "correlation.csv", std::ios::binary);
    report::writeCsv(csv, head, rows);
    Json j = header("correlate", args);
    j["inputs"] = l.digests;
    j["pairs"] = o.pairs;
    j["labels"] = labels;
    j["median_abs_cosine"] = report::number(medianAbsolutePairwiseCosine(dirs));
    j["pc1_explained_variance_ratio"] = report::number(sub.explainedVarianceRatios.front());
    Json pc1Cos = Json::array();
    for (std::size_t i = 0; i + 1 < corr.size(); ++i) pc1Cos.push_back(report::number(corr(i, corr.size() - 1)));
    j["pc1_cosines"] = std::move(pc1Cos);
    report::saveJson(dir / "correlate.json", j);
  }
  report::writeCsv(out, head, rows);
  return kExitSuccess;
}

int runAttrDiffCommand(const AttrDiffOptions& o, std::span<const std::string> args,
                       std::ostream& out, std::ostream& err) {
  const Loaded l = load(o.in);
  const auto& a = l.lists.section(io::SectionKind::Group, o.groupA);
  const auto& b = l.lists.section(io::SectionKind::Group, o.groupB);
  const AttributeGroups groups = AttributeGroups::make(
      {a.name, b.name}, {io::resolve(l.space, a), io::resolve(l.space, b)});
  const double value = attributeDifferenceNorm(groups.groups[0], groups.groups[1]);

  Json j = header("attrdiff", args);
  j["inputs"] = l.digests;
  j["attributes"] = {{"a", tokenSection(a)}, {"b", tokenSection(b)}};
  j["attribute_difference_norm"] = report::number(value);
  j["warnings"] = Json::array();
  const bool degenerate = value <= kDegenerateStddev;
  if (degenerate) j["warnings"].push_back("attribute sets have identical normalized means");
  report::writeJson(out, j);
  if (degenerate) {
    err << "degenerate: attribute sets have identical normalized means\n";
    return kExitDegenerate;
  }
  return kExitSuccess;
}

int runAuditCommand(const AuditOptions& o, std::span<const std::string> args,
                    std::ostream& out) {
  const ScoreKind score = parseScoreKind(o.score);
  ProbeConfig cfg;
  cfg.dimension = o.dim;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.maxStoredWitnesses = o.maxWitnesses;
  cfg.workers = o.workers;
  cfg.validate();

  const TrustworthinessReport trust = trustworthinessProbe(score, cfg);
  const ComparabilityReport comp = comparabilityProbe(score, cfg);

  Json j = header("audit", args);
  j["score"] = toString(score);
  j["trustworthiness"] = report::toJson(trust);
  j["comparability"] = report::toJson(comp);
  j["summary"] = {{"unbiased_trustworthy_on_probe", trust.witnessCount == 0},
                  {"extrema_comparable_on_probe", comp.extremaIndependentOfAttributes}};

  if (!o.outDir.empty()) report::saveJson(prepareOut(o.outDir) / "audit.json", j);
  report::writeJson(out, j);
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// counterexample

struct EmittedGeometry {
  EmbeddingSpace space;
  io::WordlistConfig lists;
  BiasWitness witness;
  std::vector<std::string> replay;  // suggested follow-up invocation
};

void addAll(EmbeddingSpace& space, const std::vector<std::string>& tokens, const VectorSet& vs) {
  for (std::size_t i = 0; i < tokens.size(); ++i) space.add(tokens[i], vs[i]);
}

std::vector<std::string> numberedTokens(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

EmittedGeometry weatGeometry(const WeatInstance& inst, BiasWitness witness) {
  const std::size_t m = inst.targetsPerSet();
  const auto xs = numberedTokens("x", m);
  const auto ys = numberedTokens("y", m);
  const auto as = numberedTokens("a", inst.a.size());
  const auto bs = numberedTokens("b", inst.b.size());
  EmittedGeometry g{EmbeddingSpace(inst.dim()), {}, std::move(witness), {}};
  addAll(g.space, xs, inst.x.members);
  addAll(g.space, ys, inst.y.members);
  addAll(g.space, as, inst.a);
  addAll(g.space, bs, inst.b);
  g.lists.add({io::SectionKind::Group, "A", as});
  g.lists.add({io::SectionKind::Group, "B", bs});
  g.lists.add({io::SectionKind::Targets, "X", xs});
  g.lists.add({io::SectionKind::Targets, "Y", ys});
  g.replay = {"weat",        "--group-a",   "A", "--group-b", "B", "--targets-x",
              "X",           "--targets-y", "Y", "--permutations", "exact"};
  return g;
}

EmittedGeometry directBiasGeometry(const DirectBiasCounterexample& ce) {
  EmittedGeometry g{EmbeddingSpace(ce.family.dim()), {}, ce.witness, {}};
  const std::vector<std::string> as{"a1", "a2"};
  const std::vector<std::string> cs{"c1", "c2"};
  addAll(g.space, as, ce.groups.groups[0]);
  addAll(g.space, cs, ce.groups.groups[1]);
  g.space.add("t_neutral", ce.neutralTarget);
  g.space.add("t_biased", ce.separatingTarget);
  g.lists.add({io::SectionKind::Group, "A", as});
  g.lists.add({io::SectionKind::Group, "C", cs});
  g.lists.add({io::SectionKind::Pairs, "defining", {"a1", "c1", "a2", "c2"}});
  g.lists.add({io::SectionKind::Targets, "neutral", {"t_neutral"}});
  g.lists.add({io::SectionKind::Targets, "biased", {"t_biased"}});
  g.lists.add({io::SectionKind::Targets, "probes", {"t_neutral", "t_biased"}});
  g.replay = {"directbias", "--pairs", "defining", "--neutral", "probes", "--groups", "A,C"};
  return g;
}

int runCounterexampleCommand(const CounterexampleOptions& o, std::span<const std::string> args,
                             std::ostream& out) {
  EmittedGeometry g{EmbeddingSpace(1), {}, {}, {}};
  if (o.kind == "weat-zero") {
    WeatZeroBias ce = constructWeatZeroBias(o.dim);
    g = weatGeometry(ce.instance, std::move(ce.witness));
  } else if (o.kind == "weat-extremal") {
    const auto [a, b] = attributesWithDifferenceNorm(1.0, o.dim, o.seed);
    const WeatInstance inst = constructWeatExtremal(o.m, a, b);
    BiasWitness w;
    w.kind = WitnessKind::Extremal;
    w.score = ScoreKind::WeatEffectSize;
    w.description = "X holds copies of the normalized-mean difference, Y its negation";
    for (std::size_t i = 0; i < inst.targetsPerSet(); ++i) {
      w.vectors.push_back({"x:" + std::to_string(i), inst.x.members[i]});
      w.vectors.push_back({"y:" + std::to_string(i), inst.y.members[i]});
    }
    w.vectors.push_back({"a:0", a.front()});
    w.vectors.push_back({"b:0", b.front()});
    w.scores.push_back({"effect_size", effectSize(inst)});
    g = weatGeometry(inst, std::move(w));
  } else {
    g = directBiasGeometry(constructDirectBiasCounterexample(o.r, o.x, o.dim));
  }

  const fs::path dir = prepareOut(o.outDir);
  const fs::path embPath = dir / "embeddings.txt";
  const fs::path listPath = dir / "wordlists.txt";
  io::saveEmbeddings(embPath, g.space);
  io::saveWordlists(listPath, g.lists);

  std::vector<std::string> replay{g.replay.front(), "--embeddings", embPath.string(),
                                  "--wordlists", listPath.string()};
  replay.insert(replay.end(), g.replay.begin() + 1, g.replay.end());

  Json j = header("counterexample", args);
  j["kind"] = o.kind;
  j["files"] = {{"embeddings", report::fileDigest(embPath)},
                {"wordlists", report::fileDigest(listPath)}};
  j["replay"] = replay;
  j["witness"] = report::toJson(g.witness);
  report::saveJson(dir / "witness.json", j["witness"]);
  report::writeJson(out, j);
  return kExitSuccess;
}

void addInputs(CLI::App* sub, Inputs& in) {
  sub->add_option("--embeddings", in.embeddings, "word2vec text embedding file")->required();
  sub->add_option("--wordlists", in.wordlists, "wordlist configuration file")->required();
}

int exitCodeFor(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Usage:
      return kExitUsage;
    case ErrorCategory::Data:
      return kExitData;
    case ErrorCategory::Degenerate:
      return kExitDegenerate;
  }
  return kExitData;
}

}  // namespace

int runCli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cosine-based embedding bias scores and their audit", "biasaudit"};
  app.require_subcommand(1);

  WeatOptions weat;
  auto* weatCmd = app.add_subcommand("weat", "WEAT scores, effect size and permutation test");
  addInputs(weatCmd, weat.in);
  weatCmd->add_option("--group-a", weat.groupA, "attribute group A")->required();
  weatCmd->add_option("--group-b", weat.groupB, "attribute group B")->required();
  weatCmd->add_option("--targets-x", weat.targetsX, "target set X")->required();
  weatCmd->add_option("--targets-y", weat.targetsY, "target set Y")->required();
  weatCmd->add_option("--permutations", weat.permutations, "auto, exact, none or a sample count")
      ->capture_default_str();
  weatCmd->add_option("--seed", weat.seed, "Monte Carlo seed")->capture_default_str();
  weatCmd->add_option("--workers", weat.workers, "threads, 0 for all")->capture_default_str();
  weatCmd->add_option("--out", weat.outDir, "also write weat.json and scores.csv here");

  DirectBiasOptions db;
  auto* dbCmd = app.add_subcommand("directbias", "Direct Bias against the defining-pair subspace");
  addInputs(dbCmd, db.in);
  dbCmd->add_option("--pairs", db.pairs, "pairs section")->required();
  dbCmd->add_option("--neutral", db.neutral, "targets section of neutral words")->required();
  dbCmd->add_option("--strictness", db.strictness, "strictness c >= 0")->capture_default_str();
  dbCmd->add_option("--components", db.components, "bias subspace dimension k")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  dbCmd->add_option("--warn-threshold", db.warnThreshold,
                    "warn when the median |cos| between pair directions is below this")
      ->capture_default_str();
  dbCmd->add_option("--groups", db.groups,
                    "comma-separated group sections for per-word bias verdicts");
  dbCmd->add_option("--out", db.outDir, "also write directbias.json and words.csv here");

  CorrelateOptions corr;
  auto* corrCmd = app.add_subcommand("correlate", "pair-direction cosine matrix with PC1");
  addInputs(corrCmd, corr.in);
  corrCmd->add_option("--pairs", corr.pairs, "pairs section")->required();
  corrCmd->add_option("--out", corr.outDir, "also write correlation.csv and correlate.json here");

  AttrDiffOptions ad;
  auto* adCmd = app.add_subcommand("attrdiff", "norm of the normalized-mean difference");
  addInputs(adCmd, ad.in);
  adCmd->add_option("--group-a", ad.groupA, "attribute group A")->required();
  adCmd->add_option("--group-b", ad.groupB, "attribute group B")->required();

  AuditOptions au;
  auto* auCmd = app.add_subcommand("audit", "trustworthiness and comparability probes");
  auCmd->add_option("--score", au.score, "weat-s, weat-d or directbias")->required();
  auCmd->add_option("--dim", au.dim, "embedding dimension")->capture_default_str();
  auCmd->add_option("--trials", au.trials, "probe trials")->capture_default_str();
  auCmd->add_option("--seed", au.seed, "probe seed")->capture_default_str();
  auCmd->add_option("--max-witnesses", au.maxWitnesses, "stored witnesses per probe")
      ->capture_default_str();
  auCmd->add_option("--workers", au.workers, "threads, 0 for all")->capture_default_str();
  auCmd->add_option("--out", au.outDir, "also write audit.json here");

  CounterexampleOptions ce;
  auto* ceCmd = app.add_subcommand("counterexample", "write a constructed geometry as input files");
  ceCmd->add_option("--kind", ce.kind, "weat-zero, weat-extremal or directbias")
      ->required()
      ->check(CLI::IsMember({"weat-zero", "weat-extremal", "directbias"}));
  ceCmd->add_option("--r", ce.r, "directbias: ratio r > 1")->capture_default_str();
  ceCmd->add_option("--x", ce.x, "directbias: scale x > 0")->capture_default_str();
  ceCmd->add_option("--dim", ce.dim, "embedding dimension >= 2")->capture_default_str();
  ceCmd->add_option("--m", ce.m, "weat-extremal: targets per set")->capture_default_str();
  ceCmd->add_option("--seed", ce.seed, "weat-extremal: attribute draw seed")->capture_default_str();
  ceCmd->add_option("--out", ce.outDir, "output directory")->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (weatCmd->parsed()) return runWeatCommand(weat, args, out, err);
    if (dbCmd->parsed()) return runDirectBiasCommand(db, args, out);
    if (corrCmd->parsed()) return runCorrelateCommand(corr, args, out);
    if (adCmd->parsed()) return runAttrDiffCommand(ad, args, out, err);
    if (auCmd->parsed()) return runAuditCommand(au, args, out);
    return runCounterexampleCommand(ce, args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exitCodeFor(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace biasaudit::cli
