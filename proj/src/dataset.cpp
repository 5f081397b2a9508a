#include "vimlab/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vimlab {

namespace {

std::string kind_to_string(const ColumnMeta& m) {
  switch (m.kind) {
    case ColumnKind::Continuous: return "continuous";
    case ColumnKind::Binary: return "binary";
    case ColumnKind::Multinomial:
      return "multinomial(" + std::to_string(m.levels) + ")";
  }
  return "continuous";
}

}  // namespace

Dataset::Dataset(std::vector<ColumnMeta> meta,
                 std::vector<std::vector<double>> values)
    : meta_(std::move(meta)) {
  if (meta_.size() != values.size()) {
    throw std::invalid_argument("Dataset: meta/value column count mismatch");
  }
  n_rows_ = values.empty() ? 0 : values.front().size();
  cols_.reserve(values.size());
  for (auto& v : values) {
    if (v.size() != n_rows_) {
      throw std::invalid_argument("Dataset: ragged columns");
    }
    cols_.push_back(std::make_shared<const std::vector<double>>(std::move(v)));
  }
  int outcomes = 0;
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    if (meta_[i].role == ColumnRole::Outcome) ++outcomes;
    validate_column(i);
  }
  if (outcomes > 1) {
    throw std::invalid_argument("Dataset: more than one outcome column");
  }
}

Dataset::Dataset(Unchecked, std::vector<ColumnMeta> meta,
                 std::vector<ColumnPtr> cols, std::size_t n_rows)
    : meta_(std::move(meta)), cols_(std::move(cols)), n_rows_(n_rows) {}

void Dataset::validate_column(std::size_t i) const {
  const ColumnMeta& m = meta_[i];
  if (m.kind == ColumnKind::Multinomial && m.levels < 2) {
    throw std::invalid_argument("Dataset: multinomial column '" + m.name +
                                "' needs >= 2 levels");
  }
  for (double v : *cols_[i]) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Dataset: non-finite value in '" + m.name +
                                  "'");
    }
    if (m.kind == ColumnKind::Binary && v != 0.0 && v != 1.0) {
      throw std::invalid_argument("Dataset: binary column '" + m.name +
                                  "' has value outside {0,1}");
    }
    if (m.kind == ColumnKind::Multinomial) {
      if (v != std::floor(v) || v < 1.0 || v > static_cast<double>(m.levels)) {
        throw std::invalid_argument("Dataset: multinomial column '" + m.name +
                                    "' has code outside 1.." +
                                    std::to_string(m.levels));
      }
    }
  }
}

std::size_t Dataset::find(std::string_view name) const {
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    if (meta_[i].name == name) return i;
  }
  return npos;
}

std::size_t Dataset::index_of(std::string_view name) const {
  std::size_t i = find(name);
  if (i == npos) {
    throw std::invalid_argument("Dataset: unknown column '" +
                                std::string(name) + "'");
  }
  return i;
}

std::size_t Dataset::outcome_index() const {
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    if (meta_[i].role == ColumnRole::Outcome) return i;
  }
  return npos;
}

const std::vector<double>& Dataset::outcome() const {
  std::size_t i = outcome_index();
  if (i == npos) throw std::invalid_argument("Dataset: no outcome column");
  return *cols_[i];
}

std::vector<std::size_t> Dataset::predictor_indices() const {
  std::vector<std::size_t> out;
  out.reserve(meta_.size());
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    if (meta_[i].role == ColumnRole::Predictor) out.push_back(i);
  }
  return out;
}

Dataset Dataset::with_column(std::string_view name,
                             std::vector<double> values) const {
  std::size_t i = index_of(name);
  if (values.size() != n_rows_) {
    throw std::invalid_argument("with_column: wrong length for '" +
                                std::string(name) + "'");
  }
  Dataset out(Unchecked{}, meta_, cols_, n_rows_);
  out.cols_[i] = std::make_shared<const std::vector<double>>(std::move(values));
  out.validate_column(i);
  return out;
}

Dataset Dataset::take_rows(std::span<const std::size_t> rows) const {
  std::vector<ColumnPtr> cols;
  cols.reserve(cols_.size());
  for (const auto& c : cols_) {
    std::vector<double> v(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r] >= n_rows_) throw std::out_of_range("take_rows: bad index");
      v[r] = (*c)[rows[r]];
    }
    cols.push_back(std::make_shared<const std::vector<double>>(std::move(v)));
  }
  return Dataset(Unchecked{}, meta_, std::move(cols), rows.size());
}

Dataset Dataset::drop_column(std::string_view name) const {
  std::size_t i = index_of(name);
  std::vector<ColumnMeta> meta = meta_;
  std::vector<ColumnPtr> cols = cols_;
  meta.erase(meta.begin() + static_cast<std::ptrdiff_t>(i));
  cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(i));
  return Dataset(Unchecked{}, std::move(meta), std::move(cols), n_rows_);
}

Dataset Dataset::with_outcome(std::string_view name) const {
  std::size_t target = index_of(name);
  std::vector<ColumnMeta> meta;
  std::vector<ColumnPtr> cols;
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    if (meta_[i].role == ColumnRole::Outcome && i != target) continue;
    ColumnMeta m = meta_[i];
    m.role = (i == target) ? ColumnRole::Outcome : ColumnRole::Predictor;
    meta.push_back(std::move(m));
    cols.push_back(cols_[i]);
  }
  return Dataset(Unchecked{}, std::move(meta), std::move(cols), n_rows_);
}

void save_dataset_csv(const Dataset& data, const std::string& csv_path,
                      const std::string& schema_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  for (std::size_t c = 0; c < data.n_cols(); ++c) {
    if (c) csv << ',';
    csv << data.meta(c).name;
  }
  csv << '\n';
  char buf[40];
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < data.n_cols(); ++c) {
      if (c) csv << ',';
      const ColumnMeta& m = data.meta(c);
      if (m.kind == ColumnKind::Continuous) {
        std::snprintf(buf, sizeof buf, "%.17g", data.value(r, c));
      } else {
        std::snprintf(buf, sizeof buf, "%d",
                      static_cast<int>(data.value(r, c)));
      }
      csv << buf;
    }
    csv << '\n';
  }

  std::ofstream schema(schema_path);
  if (!schema) throw std::runtime_error("cannot open " + schema_path);
  for (std::size_t c = 0; c < data.n_cols(); ++c) {
    const ColumnMeta& m = data.meta(c);
    schema << m.name << " = " << kind_to_string(m) << ' '
           << (m.role == ColumnRole::Outcome ? "outcome" : "predictor")
           << '\n';
  }
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

ColumnMeta parse_schema_line(const std::string& line) {
  std::size_t eq = line.find('=');
  if (eq == std::string::npos) {
    throw std::runtime_error("schema: missing '=' in line: " + line);
  }
  ColumnMeta m;
  m.name = trim(line.substr(0, eq));
  std::istringstream rest(line.substr(eq + 1));
  std::string kind, role;
  rest >> kind >> role;
  if (kind == "continuous") {
    m.kind = ColumnKind::Continuous;
  } else if (kind == "binary") {
    m.kind = ColumnKind::Binary;
  } else if (kind.rfind("multinomial(", 0) == 0 && kind.back() == ')') {
    m.kind = ColumnKind::Multinomial;
    m.levels = std::stoi(kind.substr(12, kind.size() - 13));
  } else {
    throw std::runtime_error("schema: unknown kind '" + kind + "'");
  }
  if (role == "outcome") {
    m.role = ColumnRole::Outcome;
  } else if (role == "predictor") {
    m.role = ColumnRole::Predictor;
  } else {
    throw std::runtime_error("schema: unknown role '" + role + "'");
  }
  return m;
}

}  // namespace

Dataset load_dataset_csv(const std::string& csv_path,
                         const std::string& schema_path) {
  std::ifstream schema(schema_path);
  if (!schema) throw std::runtime_error("cannot open " + schema_path);
  std::vector<ColumnMeta> metas;
  std::string line;
  while (std::getline(schema, line)) {
    if (trim(line).empty()) continue;
    metas.push_back(parse_schema_line(line));
  }

  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  if (!std::getline(csv, line)) throw std::runtime_error("csv: empty file");
  std::vector<std::string> headers;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) headers.push_back(trim(cell));
  }
  if (headers.size() != metas.size()) {
    throw std::runtime_error("csv/schema column count mismatch");
  }
  // Schema order must match the header order.
  std::vector<ColumnMeta> ordered(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    bool found = false;
    for (const auto& m : metas) {
      if (m.name == headers[c]) {
        ordered[c] = m;
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::runtime_error("schema: no entry for column '" + headers[c] +
                               "'");
    }
  }

  std::vector<std::vector<double>> values(headers.size());
  while (std::getline(csv, line)) {
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= values.size()) throw std::runtime_error("csv: extra cells");
      values[c++].push_back(std::stod(cell));
    }
    if (c != values.size()) throw std::runtime_error("csv: missing cells");
  }
  return Dataset(std::move(ordered), std::move(values));
}

}  // namespace vimlab
