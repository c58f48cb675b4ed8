#include "biasaudit/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "biasaudit/errors.hpp"
#include "symmetric_eigen.hpp"

namespace biasaudit {

namespace {

// Removes the projections onto `basis` (assumed orthonormal) and normalizes.
// Returns false when nothing is left.
bool orthonormalizeAgainst(Vector& v, const VectorSet& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis) {
      const double p = dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * b[i];
    }
  }
  const double n = norm(v);
  if (n <= 1e-10) return false;
  for (double& x : v) x /= n;
  return true;
}

}  // namespace

DefiningSetFamily DefiningSetFamily::make(std::vector<VectorSet> sets) {
  if (sets.empty()) throw EmptyInputError("defining set family is empty");
  if (sets.front().empty()) throw EmptyInputError("defining set 0 is empty");
  const std::size_t dim = sets.front().front().size();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) throw EmptyInputError("defining set " + std::to_string(i) + " is empty");
    for (const Vector& w : sets[i]) {
      if (w.size() != dim) {
        throw DimensionError("defining set " + std::to_string(i) + " has a vector of dimension " +
                             std::to_string(w.size()) + ", expected " + std::to_string(dim));
      }
    }
  }
  return DefiningSetFamily{std::move(sets)};
}

std::size_t DefiningSetFamily::dim() const noexcept {
  return sets.empty() || sets.front().empty() ? 0 : sets.front().front().size();
}

VectorSet centeredSamples(const DefiningSetFamily& family) {
  VectorSet samples;
  for (const VectorSet& set : family.sets) {
    Vector mu(set.front().size(), 0.0);
    for (const Vector& w : set) {
      for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += w[i];
    }
    for (double& x : mu) x /= static_cast<double>(set.size());
    for (const Vector& w : set) samples.push_back(subtract(w, mu));
  }
  return samples;
}

void applySignRule(Vector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (!v.empty() && v[best] < 0.0) {
    for (double& x : v) x = -x;
  }
}

BiasSubspace pca(const VectorSet& samples, std::size_t k) {
  if (samples.empty()) throw EmptyInputError("PCA needs at least one sample");
  const std::size_t dim = samples.front().size();
  if (k == 0) throw InvalidParameterError("PCA needs k >= 1");
  if (k > dim) {
    throw InvalidParameterError("PCA k = " + std::to_string(k) + " exceeds dimension " +
                                std::to_string(dim));
  }
  double total = 0.0;
  for (const Vector& s : samples) {
    if (s.size() != dim) throw DimensionError("PCA samples have mixed dimensions");
    total += dot(s, s);
  }
  if (total == 0.0) throw DegenerateInputError("PCA samples are all zero");

  const std::size_t count = samples.size();
  BiasSubspace out;
  out.sampleCount = count;

  if (dim <= count) {
    // Scatter matrix S^T S (dim x dim).
    std::vector<double> scatter(dim * dim, 0.0);
    for (const Vector& s : samples) {
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) scatter[i * dim + j] += s[i] * s[j];
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < i; ++j) scatter[i * dim + j] = scatter[j * dim + i];
    }
    detail::EigenPairs eig = detail::symmetricEigen(std::move(scatter), dim);
    for (std::size_t c = 0; c < k; ++c) {
      out.components.push_back(std::move(eig.vectors[c]));
      out.eigenvalues.push_back(std::max(0.0, eig.values[c]));
    }
  } else {
    // Fewer samples than dimensions: diagonalize the Gram matrix S S^T and map
    // eigenvectors back through S^T.
    std::vector<double> gram(count * count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i; j < count; ++j) {
        gram[i * count + j] = gram[j * count + i] = dot(samples[i], samples[j]);
      }
    }
    detail::EigenPairs eig = detail::symmetricEigen(std::move(gram), count);
    const double floor = 1e-12 * std::max(eig.values.front(), 0.0);
    for (std::size_t c = 0; c < std::min(k, count); ++c) {
      if (eig.values[c] <= floor) break;
      Vector comp(dim, 0.0);
      for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < dim; ++j) comp[j] += eig.vectors[c][i] * samples[i][j];
      }
      if (!orthonormalizeAgainst(comp, out.components)) break;
      out.components.push_back(std::move(comp));
      out.eigenvalues.push_back(eig.values[c]);
    }
  }

  // Complete a rank-deficient basis with null-space directions (eigenvalue 0).
  for (std::size_t axis = 0; out.components.size() < k && axis < dim; ++axis) {
    Vector e(dim, 0.0);
    e[axis] = 1.0;
    if (orthonormalizeAgainst(e, out.components)) {
      out.components.push_back(std::move(e));
      out.eigenvalues.push_back(0.0);
    }
  }

  for (std::size_t c = 0; c < out.components.size(); ++c) {
    applySignRule(out.components[c]);
    out.explainedVarianceRatios.push_back(out.eigenvalues[c] / total);
  }
  return out;
}

VectorSet pairDirections(const DefiningSetFamily& family) {
  VectorSet out;
  out.reserve(family.sets.size());
  for (std::size_t i = 0; i < family.sets.size(); ++i) {
    const VectorSet& pair = family.sets[i];
    if (pair.size() != 2) {
      throw InvalidParameterError("pair directions need two-member defining sets; set " +
                                  std::to_string(i) + " has " + std::to_string(pair.size()));
    }
    const Vector diff = subtract(pair[0], pair[1]);
    if (norm(diff) == 0.0) {
      throw DegenerateInputError("defining pair " + std::to_string(i) + " has identical members");
    }
    out.push_back(unit(diff));
  }
  return out;
}

SquareMatrix correlationMatrix(const VectorSet& directions, const std::optional<Vector>& extra) {
  VectorSet all = directions;
  if (extra) all.push_back(*extra);
  SquareMatrix m(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    m(i, i) = 1.0;
    for (std::size_t j = i + 1; j < all.size(); ++j) m(i, j) = m(j, i) = cosine(all[i], all[j]);
  }
  return m;
}

double medianAbsolutePairwiseCosine(const VectorSet& directions) {
  std::vector<double> values;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    for (std::size_t j = i + 1; j < directions.size(); ++j) {
      values.push_back(std::abs(cosine(directions[i], directions[j])));
    }
  }
  if (values.empty()) return 1.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace biasaudit
