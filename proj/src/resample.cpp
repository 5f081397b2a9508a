#include "vimlab/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vimlab {

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k,
                                        RngStream& rng) {
  if (k > n) throw std::invalid_argument("sample_indices: k > n");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(k);
  std::sort(perm.begin(), perm.end());
  return perm;
}

SplitIndices split_train_validation(const Dataset& data, double fraction,
                                    RngStream rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split_train_validation: fraction not in (0,1)");
  }
  std::size_t n = data.n_rows();
  if (n < 3) {
    throw std::invalid_argument("split_train_validation: need at least 3 rows");
  }
  auto n_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n) {
    throw std::invalid_argument(
        "split_train_validation: fraction leaves an empty set");
  }
  SplitIndices out;
  out.train = sample_indices(n, n_train, rng);
  out.validation.reserve(n - n_train);
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t < out.train.size() && out.train[t] == i) {
      ++t;
    } else {
      out.validation.push_back(i);
    }
  }
  return out;
}

Dataset subsample_without_replacement(const Dataset& data, std::size_t size,
                                      RngStream rng) {
  if (size > data.n_rows()) {
    throw std::invalid_argument("subsample_without_replacement: size > n_rows");
  }
  auto rows = sample_indices(data.n_rows(), size, rng);
  return data.take_rows(rows);
}

std::vector<double> permuted_values(const std::vector<double>& values,
                                    RngStream& rng) {
  std::vector<double> out = values;
  for (std::size_t i = out.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(out[i - 1], out[j]);
  }
  return out;
}

Dataset permute_column(const Dataset& data, std::string_view col,
                       RngStream rng) {
  std::size_t i = data.index_of(col);
  if (data.meta(i).role != ColumnRole::Predictor) {
    throw std::invalid_argument("permute_column: '" + std::string(col) +
                                "' is not a predictor");
  }
  return data.with_column(col, permuted_values(data.column(i), rng));
}

}  // namespace vimlab
