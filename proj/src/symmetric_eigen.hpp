#pragma once

#include <cstddef>
#include <vector>

namespace biasaudit::detail {

struct EigenPairs {
  std::vector<double> values;               // descending
  std::vector<std::vector<double>> vectors;  // vectors[i] belongs to values[i]
};

/// Cyclic Jacobi eigendecomposition of a dense symmetric n x n matrix given in
/// row-major order. Exact for matrices that are already diagonal.
EigenPairs symmetricEigen(std::vector<double> matrix, std::size_t n);

}  // namespace biasaudit::detail
