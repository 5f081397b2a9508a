#include "vimlab/model.hpp"

#include <cmath>
#include <stdexcept>

#include "vimlab/accum.hpp"

namespace vimlab {

namespace detail {

void ModelImpl::predict_swapped(const Dataset& rows,
                                const std::vector<double>& base,
                                std::string_view column,
                                const std::vector<double>& values,
                                std::vector<double>& out) const {
  (void)base;
  predict(rows.with_column(column, std::vector<double>(values)), out);
}

namespace {

class FunctionModel final : public ModelImpl {
 public:
  FunctionModel(std::string family,
                std::function<std::vector<double>(const Dataset&)> fn)
      : family_(std::move(family)), fn_(std::move(fn)) {}

  std::string family() const override { return family_; }
  void predict(const Dataset& rows, std::vector<double>& out) const override {
    out = fn_(rows);
    if (out.size() != rows.n_rows()) {
      throw std::runtime_error("function model returned wrong length");
    }
  }
  bool depends_on(std::string_view) const override { return true; }
  std::string dump() const override { return "function " + family_ + "\n"; }

 private:
  std::string family_;
  std::function<std::vector<double>(const Dataset&)> fn_;
};

}  // namespace
}  // namespace detail

std::string FittedModel::family() const { return impl_->family(); }

const TrainSummary& FittedModel::summary() const { return impl_->summary; }

std::vector<double> FittedModel::predict(const Dataset& rows) const {
  std::vector<double> out;
  impl_->predict(rows, out);
  for (double v : out) {
    if (!std::isfinite(v)) throw std::runtime_error("non-finite prediction");
  }
  return out;
}

std::vector<double> FittedModel::predict_swapped(
    const Dataset& rows, const std::vector<double>& base,
    std::string_view column, const std::vector<double>& values) const {
  std::vector<double> out;
  impl_->predict_swapped(rows, base, column, values, out);
  return out;
}

bool FittedModel::depends_on(std::string_view column) const {
  return impl_->depends_on(column);
}

std::string FittedModel::dump() const { return impl_->dump(); }

FittedModel FittedModel::from_function(
    std::string family, std::function<std::vector<double>(const Dataset&)> fn) {
  return FittedModel(std::make_shared<detail::FunctionModel>(std::move(family),
                                                             std::move(fn)));
}

std::string family_name(const ModelSpec& spec) {
  if (std::holds_alternative<OracleSpec>(spec)) return "oracle";
  if (std::holds_alternative<AdditiveSplineSpec>(spec)) return "spline";
  return "gbt";
}

GradientBoostingSpec default_gbt_schedule(std::size_t n_train) {
  if (n_train < 10) {
    throw std::invalid_argument("default_gbt_schedule: n_train must be >= 10");
  }
  GradientBoostingSpec spec;
  spec.subsample = 0.8;
  spec.min_leaf = 1;
  if (n_train < 1000) {
    spec.learning_rate = 0.05;
    spec.n_trees = 5000;
    spec.max_depth = 2;
  } else if (n_train < 10000) {
    spec.learning_rate = 0.1;
    spec.n_trees = 2000;
    spec.max_depth = 4;
  } else {
    spec.learning_rate = 0.3;
    spec.n_trees = 500;
    spec.max_depth = 6;
  }
  return spec;
}

namespace {

void validate_gbt(const GradientBoostingSpec& s) {
  if (s.n_trees < 1 || s.n_trees > 10000) {
    throw std::invalid_argument("gbt: n_trees must be in [1, 10000]");
  }
  if (s.max_depth < 1 || s.max_depth > 12) {
    throw std::invalid_argument("gbt: max_depth must be in [1, 12]");
  }
  if (!(s.learning_rate > 0.0 && s.learning_rate <= 1.0)) {
    throw std::invalid_argument("gbt: learning_rate must be in (0, 1]");
  }
  if (!(s.subsample > 0.0 && s.subsample <= 1.0)) {
    throw std::invalid_argument("gbt: subsample must be in (0, 1]");
  }
  if (s.min_leaf < 1) throw std::invalid_argument("gbt: min_leaf must be >= 1");
}

}  // namespace

// Family trainers, defined in their own translation units.
FittedModel fit_oracle(const Dataset& train,
                       const std::vector<std::string>& exclude);
FittedModel fit_spline(const AdditiveSplineSpec& spec, const Dataset& train,
                       const std::vector<std::string>& exclude);
FittedModel fit_gbt(const GradientBoostingSpec& spec, const Dataset& train,
                    RngStream rng, const std::vector<std::string>& exclude);

FittedModel fit(const ModelSpec& spec, const Dataset& train, RngStream rng,
                const std::vector<std::string>& exclude) {
  if (train.outcome_index() == Dataset::npos) {
    throw std::invalid_argument("fit: training data has no outcome column");
  }
  if (train.n_rows() < 10) {
    throw std::invalid_argument("fit: need at least 10 training rows");
  }
  if (const auto* gb = std::get_if<GradientBoostingSpec>(&spec)) {
    validate_gbt(*gb);
    return fit_gbt(*gb, train, rng, exclude);
  }
  if (const auto* sp = std::get_if<AdditiveSplineSpec>(&spec)) {
    return fit_spline(*sp, train, exclude);
  }
  return fit_oracle(train, exclude);
}

double mse(const FittedModel& model, const Dataset& rows) {
  if (rows.n_rows() == 0) throw std::invalid_argument("mse: no rows");
  const std::vector<double>& y = rows.outcome();
  std::vector<double> pred = model.predict(rows);
  CompensatedSum sum;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double d = y[i] - pred[i];
    sum.add(d * d);
  }
  return sum.value() / static_cast<double>(y.size());
}

ModelFitter fitter_for(const ModelSpec& spec) {
  return [spec](const Dataset& train, RngStream rng,
                const std::vector<std::string>& exclude) {
    return fit(spec, train, rng, exclude);
  };
}

}  // namespace vimlab
