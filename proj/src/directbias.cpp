#include "biasaudit/directbias.hpp"

#include <cmath>

#include "biasaudit/errors.hpp"

namespace biasaudit {

namespace {

void requireStrictness(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw InvalidParameterError("strictness must be a finite value >= 0");
  }
}

}  // namespace

DirectBiasConfig DirectBiasConfig::fromDirection(VectorView direction, double strictness) {
  requireStrictness(strictness);
  return DirectBiasConfig(unit(direction), strictness);
}

DirectBiasConfig DirectBiasConfig::fromSubspace(BiasSubspace subspace, double strictness) {
  requireStrictness(strictness);
  if (subspace.components.empty()) throw InvalidParameterError("bias subspace has no components");
  return DirectBiasConfig(std::move(subspace), strictness);
}

double strictnessPower(double magnitude, double strictness) {
  if (magnitude == 0.0) return 0.0;
  return std::pow(magnitude, strictness);
}

double directBiasWord(VectorView t, VectorView g, double strictness) {
  requireStrictness(strictness);
  return strictnessPower(std::abs(cosine(t, g)), strictness);
}

double directBiasSubspace(VectorView t, const BiasSubspace& subspace, double strictness) {
  requireStrictness(strictness);
  const Vector tu = unit(t);
  double sq = 0.0;
  for (const Vector& c : subspace.components) {
    const double p = dot(tu, c);
    sq += p * p;
  }
  return strictnessPower(std::min(1.0, std::sqrt(sq)), strictness);
}

double directBiasWord(VectorView t, const DirectBiasConfig& cfg) {
  if (cfg.usesSubspace()) return directBiasSubspace(t, cfg.subspace(), cfg.strictness());
  return directBiasWord(t, cfg.direction(), cfg.strictness());
}

double directBiasSet(const VectorSet& words, const DirectBiasConfig& cfg) {
  if (words.empty()) throw EmptyInputError("Direct Bias of an empty word set");
  double sum = 0.0;
  for (const Vector& w : words) sum += directBiasWord(w, cfg);
  return sum / static_cast<double>(words.size());
}

}  // namespace biasaudit
