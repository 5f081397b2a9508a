#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vimlab/dataset.hpp"
#include "vimlab/rng.hpp"

namespace vimlab {

/// Least squares on the true functional forms of the response surface.
struct OracleSpec {};

/// Penalized least squares on per-variable natural cubic spline bases plus
/// main-effect indicators for categorical predictors; no interactions.
struct AdditiveSplineSpec {
  int basis_per_var = 10;
  double ridge = 1e-6;
};

/// Stagewise squared-loss boosting of depth-limited regression trees with
/// shrinkage and row subsampling.
struct GradientBoostingSpec {
  int n_trees = 500;
  int max_depth = 4;
  double learning_rate = 0.1;
  double subsample = 0.8;
  int min_leaf = 1;
};

using ModelSpec =
    std::variant<OracleSpec, AdditiveSplineSpec, GradientBoostingSpec>;

std::string family_name(const ModelSpec& spec);

/// Boosting hyperparameters by training size: small samples get a small
/// learning rate with many trees, large samples a large rate with few.
/// The rate is non-decreasing and the tree count non-increasing in n_train.
GradientBoostingSpec default_gbt_schedule(std::size_t n_train);

struct TrainSummary {
  double train_mse = 0.0;
  std::size_t n_train = 0;
  bool ridge_fallback = false;  // rank-deficient design was regularized
};

namespace detail {
class ModelImpl {
 public:
  virtual ~ModelImpl() = default;
  virtual std::string family() const = 0;
  virtual void predict(const Dataset& rows, std::vector<double>& out) const = 0;
  virtual void predict_swapped(const Dataset& rows,
                               const std::vector<double>& base,
                               std::string_view column,
                               const std::vector<double>& values,
                               std::vector<double>& out) const;
  virtual bool depends_on(std::string_view column) const = 0;
  virtual std::string dump() const = 0;

  TrainSummary summary;
};
}  // namespace detail

/// Opaque trained predictor; prediction is deterministic and side-effect
/// free, and instances are immutable and freely shareable across threads.
class FittedModel {
 public:
  FittedModel() = default;
  explicit FittedModel(std::shared_ptr<const detail::ModelImpl> impl)
      : impl_(std::move(impl)) {}

  bool valid() const { return impl_ != nullptr; }
  std::string family() const;
  const TrainSummary& summary() const;

  /// One finite value per row; rows must carry every predictor the model was
  /// trained on.
  std::vector<double> predict(const Dataset& rows) const;

  /// Predictions with one column's values replaced, given the unswapped
  /// predictions. Tree ensembles re-walk only the trees that split on the
  /// column; other families recompute.
  std::vector<double> predict_swapped(const Dataset& rows,
                                      const std::vector<double>& base,
                                      std::string_view column,
                                      const std::vector<double>& values) const;

  /// Whether predictions can change when `column` changes.
  bool depends_on(std::string_view column) const;

  /// Text serialization of the learned structure, for golden-file tests.
  std::string dump() const;

  /// Wraps a row-batch function as a fitted model (exact-truth stubs).
  static FittedModel from_function(
      std::string family,
      std::function<std::vector<double>(const Dataset&)> fn);

  const detail::ModelImpl* impl_ptr() const { return impl_.get(); }

 private:
  std::shared_ptr<const detail::ModelImpl> impl_;
};

/// Trains the requested family. Predictors named in `exclude` are withheld
/// from the design (the leave-one-covariate-out refit path).
FittedModel fit(const ModelSpec& spec, const Dataset& train, RngStream rng,
                const std::vector<std::string>& exclude = {});

/// Mean squared prediction error on rows that include the outcome.
double mse(const FittedModel& model, const Dataset& rows);

/// Fitter injection point used by the estimators; `exclude` mirrors fit().
using ModelFitter = std::function<FittedModel(
    const Dataset& train, RngStream rng, const std::vector<std::string>& exclude)>;

ModelFitter fitter_for(const ModelSpec& spec);

/// Fitted coefficient of one oracle regressor, e.g. "X5" or "(intercept)".
double oracle_coefficient(const FittedModel& model, std::string_view label);

}  // namespace vimlab
