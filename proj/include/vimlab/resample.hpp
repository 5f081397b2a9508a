#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "vimlab/dataset.hpp"
#include "vimlab/rng.hpp"

namespace vimlab {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Disjoint exhaustive train/validation split with |train| = round(fraction*n),
/// sampled without replacement. Both index lists come back sorted.
SplitIndices split_train_validation(const Dataset& data, double fraction,
                                    RngStream rng);

/// Uniform random size-subset of rows, no duplicates, original row order.
Dataset subsample_without_replacement(const Dataset& data, std::size_t size,
                                      RngStream rng);

/// Uniform random permutation of one predictor column; everything else is
/// shared bit-identically with the input.
Dataset permute_column(const Dataset& data, std::string_view col,
                       RngStream rng);

/// The permutation itself, for callers that reuse one column buffer.
std::vector<double> permuted_values(const std::vector<double>& values,
                                    RngStream& rng);

/// First `k` elements of a uniform random permutation of 0..n-1 (sorted).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k,
                                        RngStream& rng);

}  // namespace vimlab
