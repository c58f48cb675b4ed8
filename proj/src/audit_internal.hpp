#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>

#include "biasaudit/audit.hpp"

namespace biasaudit::detail {

Vector randomVector(std::size_t dim, std::mt19937_64& rng);
VectorSet randomVectorSet(std::size_t count, std::size_t dim, std::mt19937_64& rng);
std::pair<Vector, Vector> randomOrthonormalPair(std::size_t dim, std::mt19937_64& rng);

/// v with its component along g removed.
Vector orthogonalTo(VectorView v, VectorView g);
/// Householder reflection of v across the hyperplane with unit normal w.
Vector reflect(VectorView v, VectorView w);

/// (mean, population stddev).
std::pair<double, double> populationMoments(const std::vector<double>& values);

/// Witness over a two-set WEAT instance: effect size, per-target s and the
/// aggregated bias verdict.
BiasWitness effectSizeWitness(const WeatInstance& inst, WitnessKind kind, std::string description,
                              double tolerance);

/// Witness over two paired attribute groups used both as defining pairs
/// (a_i, c_i) and as the groups of the bias predicate.
BiasWitness directBiasWitness(const VectorSet& groupA, const VectorSet& groupC,
                              const Vector& zeroTarget, const std::optional<Vector>& oneTarget,
                              double strictness, WitnessKind kind, std::string description,
                              double tolerance);

}  // namespace biasaudit::detail
