#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vimlab {

enum class ColumnKind { Continuous, Binary, Multinomial };
enum class ColumnRole { Predictor, Outcome };

struct ColumnMeta {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  int levels = 0;  // multinomial only; codes are 1..levels
  ColumnRole role = ColumnRole::Predictor;
};

/// Immutable columnar table. Columns are shared between derived datasets, so
/// row selection and single-column replacement are cheap. Construction
/// validates: equal column lengths, finite values, binary columns in {0,1},
/// multinomial codes in 1..levels, at most one outcome column.
class Dataset {
 public:
  using ColumnPtr = std::shared_ptr<const std::vector<double>>;

  Dataset() = default;
  Dataset(std::vector<ColumnMeta> meta, std::vector<std::vector<double>> values);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return meta_.size(); }

  const ColumnMeta& meta(std::size_t i) const { return meta_[i]; }
  const std::vector<ColumnMeta>& metas() const { return meta_; }
  const std::vector<double>& column(std::size_t i) const { return *cols_[i]; }
  ColumnPtr column_ptr(std::size_t i) const { return cols_[i]; }
  double value(std::size_t row, std::size_t col) const {
    return (*cols_[col])[row];
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(std::string_view name) const;
  /// Index of `name`, throws if absent.
  std::size_t index_of(std::string_view name) const;
  bool has(std::string_view name) const { return find(name) != npos; }

  /// Index of the outcome column, or npos when no outcome is attached.
  std::size_t outcome_index() const;
  const std::vector<double>& outcome() const;
  std::vector<std::size_t> predictor_indices() const;

  /// New dataset with one column's values replaced (same meta).
  Dataset with_column(std::string_view name, std::vector<double> values) const;
  /// New dataset restricted to the given rows, in the given order.
  Dataset take_rows(std::span<const std::size_t> rows) const;
  Dataset drop_column(std::string_view name) const;
  /// New dataset where `name` becomes the outcome (any previous outcome is
  /// dropped); used to re-target a model at a predictor.
  Dataset with_outcome(std::string_view name) const;

 private:
  struct Unchecked {};
  Dataset(Unchecked, std::vector<ColumnMeta> meta, std::vector<ColumnPtr> cols,
          std::size_t n_rows);
  void validate_column(std::size_t i) const;

  std::vector<ColumnMeta> meta_;
  std::vector<ColumnPtr> cols_;
  std::size_t n_rows_ = 0;
};

/// CSV with a header row; categorical columns as integer codes. The schema
/// sidecar is a flat key-value file: `name = kind role`, with multinomial
/// kinds written as multinomial(K).
void save_dataset_csv(const Dataset& data, const std::string& csv_path,
                      const std::string& schema_path);
Dataset load_dataset_csv(const std::string& csv_path,
                         const std::string& schema_path);

}  // namespace vimlab
