#include <algorithm>
#include <numeric>
#include <string>

#include "helssvr/data.hpp"
#include "helssvr/errors.hpp"

namespace helssvr {

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw DomainError("kfold_split: need 2 <= k <= n (k = " + std::to_string(k) +
                      ", n = " + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  partial_shuffle(order, n, rng);

  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t j = 0; j < n; ++j) folds[j % k].push_back(order[j]);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

}  // namespace helssvr
