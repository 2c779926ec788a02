#include "accelsel/knn.hpp"

#include <algorithm>
#include <tuple>

#include "accelsel/errors.hpp"

namespace accelsel {

KnnModel fit_knn(DenseMatrix inputs, std::vector<double> targets, std::vector<std::uint32_t> tie_rank,
                 std::size_t k) {
  if (k < 1) throw ConfigError("knn.k must be >= 1");
  if (inputs.rows() != targets.size() || tie_rank.size() != targets.size()) {
    throw ValidationError("knn: inputs, targets and tie ranks differ in length");
  }
  if (inputs.rows() < k) {
    throw InsufficientData("knn needs at least k=" + std::to_string(k) + " rows, got " +
                           std::to_string(inputs.rows()));
  }
  return KnnModel{k, std::move(inputs), std::move(targets), std::move(tie_rank)};
}

double KnnModel::predict(std::span<const double> x) const {
  struct Neighbour {
    double dist2;
    std::uint32_t rank;
    std::size_t row;
  };
  std::vector<Neighbour> all(inputs.rows());
  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    const auto row = inputs.row(r);
    double d2 = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double d = row[c] - x[c];
      d2 += d * d;
    }
    all[r] = {d2, tie_rank[r], r};
  }
  const auto closer = [](const Neighbour& a, const Neighbour& b) {
    return std::tie(a.dist2, a.rank) < std::tie(b.dist2, b.rank);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += targets[all[i].row];
  return sum / static_cast<double>(k);
}

}  // namespace accelsel
