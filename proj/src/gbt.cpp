#include "vimlab/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace vimlab::gbt {

namespace {
constexpr double kMinGain = 1e-12;
}

bool Tree::uses(std::int32_t feature) const {
  return std::binary_search(features_used.begin(), features_used.end(),
                            feature);
}

double Tree::predict_row(const double* const* columns, std::size_t row) const {
  const TreeNode* node = nodes.data();
  while (node->feature >= 0) {
    double x = columns[node->feature][row];
    bool go_left = node->categorical ? (x == node->threshold)
                                     : (x < node->threshold);
    node = nodes.data() + (go_left ? node->left : node->right);
  }
  return node->value;
}

double Ensemble::predict_row(const double* const* columns,
                             std::size_t row) const {
  double out = base_prediction;
  for (const Tree& t : trees) out += t.predict_row(columns, row);
  return out;
}

namespace {

struct SlotStats {
  std::int64_t count = 0;
  double sum = 0.0;
};

struct ScanState {
  std::int64_t left_count = 0;
  double left_sum = 0.0;
  double prev_value = 0.0;
  bool has_prev = false;
};

struct BestSplit {
  double gain = 0.0;
  std::int32_t feature = -1;
  bool categorical = false;
  double threshold = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const GradientBoostingSpec& spec,
              const std::vector<const double*>& cols,
              const std::vector<ColumnKind>& kinds,
              const std::vector<int>& levels,
              const std::vector<std::vector<std::uint32_t>>& sorted)
      : spec_(spec), cols_(cols), kinds_(kinds), levels_(levels),
        sorted_(sorted), n_(sorted.empty() ? 0 : sorted[0].size()) {}

  Tree build(const std::vector<double>& residual,
             const std::vector<char>& in_bag, std::vector<std::int32_t>& node_of) {
    Tree tree;
    // Root
    SlotStats root;
    for (std::size_t i = 0; i < n_; ++i) {
      node_of[i] = in_bag[i] ? 0 : -1;
      if (in_bag[i]) {
        ++root.count;
        root.sum += residual[i];
      }
    }
    tree.nodes.push_back(TreeNode{});
    node_stats_ = {root};

    std::size_t level_begin = 0;
    for (int depth = 0; depth < spec_.max_depth; ++depth) {
      std::size_t level_end = tree.nodes.size();
      if (level_begin == level_end) break;
      std::size_t n_slots = level_end - level_begin;

      std::vector<BestSplit> best(n_slots);
      find_numeric_splits(residual, node_of, level_begin, n_slots, best);
      find_categorical_splits(residual, node_of, level_begin, n_slots, best);

      bool any_split = false;
      for (std::size_t s = 0; s < n_slots; ++s) {
        if (best[s].feature < 0) continue;
        any_split = true;
        auto nid = static_cast<std::int32_t>(level_begin + s);
        auto left_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes[static_cast<std::size_t>(nid)] =
            TreeNode{best[s].feature, best[s].categorical, best[s].threshold,
                     left_id, left_id + 1, 0.0};
        tree.nodes.push_back(TreeNode{});
        tree.nodes.push_back(TreeNode{});
      }
      if (!any_split) break;

      // Route rows into the new level and rebuild child stats.
      node_stats_.resize(tree.nodes.size());
      for (std::size_t i = 0; i < n_; ++i) {
        std::int32_t nid = node_of[i];
        if (nid < static_cast<std::int32_t>(level_begin)) continue;
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(nid)];
        if (node.feature < 0) continue;
        double x = cols_[node.feature][i];
        bool go_left =
            node.categorical ? (x == node.threshold) : (x < node.threshold);
        std::int32_t child = go_left ? node.left : node.right;
        node_of[i] = child;
        ++node_stats_[static_cast<std::size_t>(child)].count;
        node_stats_[static_cast<std::size_t>(child)].sum += residual[i];
      }
      level_begin = level_end;
    }

    // Leaf values: mean residual in the leaf, shrunk by the learning rate.
    for (std::size_t nid = 0; nid < tree.nodes.size(); ++nid) {
      TreeNode& node = tree.nodes[nid];
      if (node.feature >= 0) {
        tree.features_used.push_back(node.feature);
        continue;
      }
      const SlotStats& st = node_stats_[nid];
      node.value = st.count > 0 ? spec_.learning_rate * st.sum /
                                      static_cast<double>(st.count)
                                : 0.0;
    }
    std::sort(tree.features_used.begin(), tree.features_used.end());
    tree.features_used.erase(
        std::unique(tree.features_used.begin(), tree.features_used.end()),
        tree.features_used.end());
    return tree;
  }

 private:
  void consider(BestSplit& best, double gain, std::int32_t feature,
                bool categorical, double threshold) const {
    // Strictly-greater keeps the lowest feature index and lowest threshold on
    // ties, because features and candidate thresholds are scanned ascending.
    if (gain > kMinGain && gain > best.gain) {
      best = BestSplit{gain, feature, categorical, threshold};
    }
  }

  static double split_gain(double left_sum, std::int64_t left_count,
                           double total_sum, std::int64_t total_count) {
    double right_sum = total_sum - left_sum;
    auto right_count = static_cast<double>(total_count - left_count);
    auto lc = static_cast<double>(left_count);
    return left_sum * left_sum / lc + right_sum * right_sum / right_count -
           total_sum * total_sum / static_cast<double>(total_count);
  }

  void find_numeric_splits(const std::vector<double>& residual,
                           const std::vector<std::int32_t>& node_of,
                           std::size_t level_begin, std::size_t n_slots,
                           std::vector<BestSplit>& best) {
    auto lb = static_cast<std::int32_t>(level_begin);
    std::vector<ScanState> state(n_slots);
    for (std::size_t f = 0; f < cols_.size(); ++f) {
      if (kinds_[f] != ColumnKind::Continuous) continue;
      std::fill(state.begin(), state.end(), ScanState{});
      const double* xv = cols_[f];
      const std::uint32_t* ord = sorted_[f].data();
      for (std::size_t k = 0; k < n_; ++k) {
        std::uint32_t row = ord[k];
        std::int32_t nid = node_of[row];
        if (nid < lb) continue;
        auto s = static_cast<std::size_t>(nid - lb);
        ScanState& st = state[s];
        double x = xv[row];
        const SlotStats& total = node_stats_[static_cast<std::size_t>(nid)];
        if (st.has_prev && x > st.prev_value &&
            st.left_count >= spec_.min_leaf &&
            total.count - st.left_count >= spec_.min_leaf) {
          consider(best[s],
                   split_gain(st.left_sum, st.left_count, total.sum,
                              total.count),
                   static_cast<std::int32_t>(f), false,
                   0.5 * (st.prev_value + x));
        }
        ++st.left_count;
        st.left_sum += residual[row];
        st.prev_value = x;
        st.has_prev = true;
      }
    }
  }

  void find_categorical_splits(const std::vector<double>& residual,
                               const std::vector<std::int32_t>& node_of,
                               std::size_t level_begin, std::size_t n_slots,
                               std::vector<BestSplit>& best) {
    auto lb = static_cast<std::int32_t>(level_begin);
    for (std::size_t f = 0; f < cols_.size(); ++f) {
      if (kinds_[f] == ColumnKind::Continuous) continue;
      int n_levels = kinds_[f] == ColumnKind::Binary ? 2 : levels_[f];
      double first_code = kinds_[f] == ColumnKind::Binary ? 0.0 : 1.0;
      std::vector<SlotStats> per_level(n_slots *
                                       static_cast<std::size_t>(n_levels));
      const double* xv = cols_[f];
      for (std::size_t i = 0; i < n_; ++i) {
        std::int32_t nid = node_of[i];
        if (nid < lb) continue;
        auto s = static_cast<std::size_t>(nid - lb);
        auto level = static_cast<std::size_t>(xv[i] - first_code);
        SlotStats& st = per_level[s * static_cast<std::size_t>(n_levels) + level];
        ++st.count;
        st.sum += residual[i];
      }
      // One category versus the rest, categories in code order.
      for (std::size_t s = 0; s < n_slots; ++s) {
        const SlotStats& total =
            node_stats_[level_begin + s];
        for (int level = 0; level < n_levels; ++level) {
          const SlotStats& left =
              per_level[s * static_cast<std::size_t>(n_levels) +
                        static_cast<std::size_t>(level)];
          if (left.count < spec_.min_leaf ||
              total.count - left.count < spec_.min_leaf) {
            continue;
          }
          consider(best[s],
                   split_gain(left.sum, left.count, total.sum, total.count),
                   static_cast<std::int32_t>(f), true,
                   first_code + static_cast<double>(level));
        }
      }
    }
  }

  const GradientBoostingSpec& spec_;
  const std::vector<const double*>& cols_;
  const std::vector<ColumnKind>& kinds_;
  const std::vector<int>& levels_;
  const std::vector<std::vector<std::uint32_t>>& sorted_;
  std::size_t n_;
  std::vector<SlotStats> node_stats_;
};

}  // namespace

Ensemble train_ensemble(const GradientBoostingSpec& spec,
                        const std::vector<std::string>& names,
                        const std::vector<ColumnKind>& kinds,
                        const std::vector<int>& levels,
                        const std::vector<const std::vector<double>*>& columns,
                        const std::vector<double>& y, RngStream rng) {
  std::size_t n = y.size();
  std::size_t p = columns.size();
  if (p == 0) throw std::invalid_argument("gbt: no features");

  Ensemble model;
  model.spec = spec;
  model.feature_names = names;
  model.feature_kinds = kinds;
  model.feature_levels = levels;
  model.feature_in_any_split.assign(p, 0);
  model.base_prediction =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

  std::vector<const double*> cols(p);
  for (std::size_t f = 0; f < p; ++f) cols[f] = columns[f]->data();

  // Presort every continuous feature once; node scans reuse this order.
  std::vector<std::vector<std::uint32_t>> sorted(p);
  for (std::size_t f = 0; f < p; ++f) {
    sorted[f].resize(n);
    std::iota(sorted[f].begin(), sorted[f].end(), 0u);
    if (kinds[f] == ColumnKind::Continuous) {
      const double* xv = cols[f];
      std::stable_sort(sorted[f].begin(), sorted[f].end(),
                       [xv](std::uint32_t a, std::uint32_t b) {
                         return xv[a] < xv[b];
                       });
    }
  }

  auto n_bag = static_cast<std::size_t>(
      std::llround(spec.subsample * static_cast<double>(n)));
  n_bag = std::max<std::size_t>(1, std::min(n, n_bag));

  std::vector<double> prediction(n, model.base_prediction);
  std::vector<double> residual(n);
  std::vector<char> in_bag(n, 1);
  std::vector<std::int32_t> node_of(n);
  std::vector<std::uint32_t> scratch;
  TreeBuilder builder(spec, cols, kinds, levels, sorted);
  RngStream bag_rng = rng.derive(1);

  model.trees.reserve(static_cast<std::size_t>(spec.n_trees));
  model.train_mse_path.reserve(static_cast<std::size_t>(spec.n_trees));
  for (int t = 0; t < spec.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - prediction[i];

    if (n_bag < n) {
      std::fill(in_bag.begin(), in_bag.end(), 0);
      // Partial Fisher-Yates over row ids, marking the first n_bag.
      scratch.resize(n);
      std::iota(scratch.begin(), scratch.end(), 0u);
      for (std::size_t i = 0; i < n_bag; ++i) {
        std::size_t j = i + static_cast<std::size_t>(bag_rng.below(n - i));
        std::swap(scratch[i], scratch[j]);
        in_bag[scratch[i]] = 1;
      }
    }

    Tree tree = builder.build(residual, in_bag, node_of);
    for (std::int32_t f : tree.features_used) {
      model.feature_in_any_split[static_cast<std::size_t>(f)] = 1;
    }

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      prediction[i] += tree.predict_row(cols.data(), i);
      double d = y[i] - prediction[i];
      sse += d * d;
    }
    model.train_mse_path.push_back(sse / static_cast<double>(n));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

class GbtFittedModel final : public detail::ModelImpl {
 public:
  explicit GbtFittedModel(Ensemble ensemble) : ensemble_(std::move(ensemble)) {}

  std::string family() const override { return "gbt"; }

  void predict(const Dataset& rows, std::vector<double>& out) const override {
    std::vector<const double*> cols = bind_columns(rows);
    std::size_t n = rows.n_rows();
    out.assign(n, ensemble_.base_prediction);
    for (const Tree& tree : ensemble_.trees) {
      for (std::size_t i = 0; i < n; ++i) {
        out[i] += tree.predict_row(cols.data(), i);
      }
    }
  }

  void predict_swapped(const Dataset& rows, const std::vector<double>& base,
                       std::string_view column,
                       const std::vector<double>& values,
                       std::vector<double>& out) const override {
    std::int32_t target = -1;
    for (std::size_t f = 0; f < ensemble_.feature_names.size(); ++f) {
      if (ensemble_.feature_names[f] == column) {
        target = static_cast<std::int32_t>(f);
        break;
      }
    }
    if (target < 0) {
      // Not a model feature; predictions cannot change.
      out = base;
      return;
    }
    if (base.size() != rows.n_rows() || values.size() != rows.n_rows()) {
      throw std::invalid_argument("predict_swapped: length mismatch");
    }
    std::vector<const double*> cols = bind_columns(rows);
    std::vector<const double*> swapped = cols;
    swapped[static_cast<std::size_t>(target)] = values.data();
    out = base;
    for (const Tree& tree : ensemble_.trees) {
      if (!tree.uses(target)) continue;
      for (std::size_t i = 0; i < rows.n_rows(); ++i) {
        out[i] += tree.predict_row(swapped.data(), i) -
                  tree.predict_row(cols.data(), i);
      }
    }
  }

  bool depends_on(std::string_view column) const override {
    for (std::size_t f = 0; f < ensemble_.feature_names.size(); ++f) {
      if (ensemble_.feature_names[f] == column) {
        return ensemble_.feature_in_any_split[f] != 0;
      }
    }
    return false;
  }

  std::string dump() const override {
    std::ostringstream os;
    os << "gbt base " << ensemble_.base_prediction << '\n';
    for (std::size_t t = 0; t < ensemble_.trees.size(); ++t) {
      os << "tree " << t << '\n';
      const Tree& tree = ensemble_.trees[t];
      for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& node = tree.nodes[i];
        if (node.feature < 0) {
          os << "  node " << i << " leaf " << node.value << '\n';
        } else {
          os << "  node " << i << ' '
             << ensemble_.feature_names[static_cast<std::size_t>(node.feature)]
             << (node.categorical ? " == " : " < ") << node.threshold << " -> "
             << node.left << ' ' << node.right << '\n';
        }
      }
    }
    return os.str();
  }

  const Ensemble& ensemble() const { return ensemble_; }

 private:
  std::vector<const double*> bind_columns(const Dataset& rows) const {
    std::vector<const double*> cols(ensemble_.feature_names.size());
    for (std::size_t f = 0; f < cols.size(); ++f) {
      cols[f] = rows.column(rows.index_of(ensemble_.feature_names[f])).data();
    }
    return cols;
  }

  Ensemble ensemble_;
};

const Ensemble& ensemble_of(const FittedModel& model) {
  const auto* impl = dynamic_cast<const GbtFittedModel*>(model.impl_ptr());
  if (!impl) throw std::invalid_argument("ensemble_of: not a gbt model");
  return impl->ensemble();
}

}  // namespace vimlab::gbt

namespace vimlab {

FittedModel fit_gbt(const GradientBoostingSpec& spec, const Dataset& train,
                    RngStream rng, const std::vector<std::string>& exclude) {
  std::vector<std::string> names;
  std::vector<ColumnKind> kinds;
  std::vector<int> levels;
  std::vector<const std::vector<double>*> columns;
  for (std::size_t c : train.predictor_indices()) {
    const ColumnMeta& m = train.meta(c);
    if (std::find(exclude.begin(), exclude.end(), m.name) != exclude.end()) {
      continue;
    }
    names.push_back(m.name);
    kinds.push_back(m.kind);
    levels.push_back(m.levels);
    columns.push_back(&train.column(c));
  }

  gbt::Ensemble ensemble = gbt::train_ensemble(spec, names, kinds, levels,
                                               columns, train.outcome(), rng);
  double train_mse_value = ensemble.train_mse_path.empty()
                               ? 0.0
                               : ensemble.train_mse_path.back();
  auto impl = std::make_shared<gbt::GbtFittedModel>(std::move(ensemble));
  impl->summary.n_train = train.n_rows();
  impl->summary.train_mse = train_mse_value;
  return FittedModel(impl);
}

}  // namespace vimlab
