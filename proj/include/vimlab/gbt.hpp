#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vimlab/dataset.hpp"
#include "vimlab/model.hpp"
#include "vimlab/rng.hpp"

namespace vimlab::gbt {

struct TreeNode {
  std::int32_t feature = -1;  // -1: leaf
  bool categorical = false;   // categorical: rows with x == threshold go left
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // leaf contribution, learning rate already applied
};

struct Tree {
  std::vector<TreeNode> nodes;
  std::vector<std::int32_t> features_used;  // sorted, unique

  bool uses(std::int32_t feature) const;
  double predict_row(const double* const* columns, std::size_t row) const;
};

/// Trained boosting ensemble; exposed for structural tests (split inspection,
/// per-iteration training error).
struct Ensemble {
  GradientBoostingSpec spec;
  std::vector<std::string> feature_names;
  std::vector<ColumnKind> feature_kinds;
  std::vector<int> feature_levels;
  double base_prediction = 0.0;
  std::vector<Tree> trees;
  std::vector<double> train_mse_path;  // after each boosting iteration
  std::vector<char> feature_in_any_split;

  double predict_row(const double* const* columns, std::size_t row) const;
};

Ensemble train_ensemble(const GradientBoostingSpec& spec,
                        const std::vector<std::string>& names,
                        const std::vector<ColumnKind>& kinds,
                        const std::vector<int>& levels,
                        const std::vector<const std::vector<double>*>& columns,
                        const std::vector<double>& y, RngStream rng);

/// The ensemble behind a gbt-family FittedModel.
const Ensemble& ensemble_of(const FittedModel& model);

}  // namespace vimlab::gbt
