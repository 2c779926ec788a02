#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "accelsel/matrix.hpp"

namespace accelsel {

// Uniform-weight k-nearest-neighbour regressor on Euclidean distance. Distance
// ties are resolved by `tie_rank` (lower first), which callers derive from the
// row keys so that predictions do not depend on row order.
struct KnnModel {
  std::size_t k = 5;
  DenseMatrix inputs;
  std::vector<double> targets;
  std::vector<std::uint32_t> tie_rank;

  double predict(std::span<const double> x) const;
};

KnnModel fit_knn(DenseMatrix inputs, std::vector<double> targets, std::vector<std::uint32_t> tie_rank,
                 std::size_t k);

}  // namespace accelsel
