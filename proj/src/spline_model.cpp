#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vimlab/model.hpp"

namespace vimlab {

namespace {

// Natural cubic spline basis on fixed knots: the identity function plus
// K-2 truncated-cube combinations that are linear beyond the boundary knots
// (Hastie/Tibshirani/Friedman parametrization).
struct SplineBasis {
  std::vector<double> knots;

  std::size_t size() const {
    return knots.size() >= 3 ? knots.size() - 1 : 1;
  }

  void eval(double x, double* out) const {
    out[0] = x;
    std::size_t k_count = knots.size();
    if (k_count < 3) return;
    double xi_last = knots[k_count - 1];
    auto cube_pos = [](double v) { return v > 0.0 ? v * v * v : 0.0; };
    auto d = [&](std::size_t k) {
      return (cube_pos(x - knots[k]) - cube_pos(x - xi_last)) /
             (xi_last - knots[k]);
    };
    double d_last = d(k_count - 2);
    for (std::size_t k = 0; k + 2 < k_count; ++k) {
      out[k + 1] = d(k) - d_last;
    }
  }
};

SplineBasis make_basis(const std::vector<double>& values, int basis_per_var) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  std::size_t k_count = static_cast<std::size_t>(basis_per_var) + 1;
  std::vector<double> knots;
  knots.reserve(k_count);
  for (std::size_t j = 0; j < k_count; ++j) {
    double q = static_cast<double>(j) / static_cast<double>(k_count - 1);
    auto idx = static_cast<std::size_t>(
        std::llround(q * static_cast<double>(n - 1)));
    double v = sorted[idx];
    if (knots.empty() || v > knots.back()) knots.push_back(v);
  }
  SplineBasis basis;
  basis.knots = std::move(knots);
  return basis;
}

struct FeatureBlock {
  std::string name;
  ColumnKind kind;
  int levels = 0;
  SplineBasis basis;  // continuous only

  std::size_t width() const {
    switch (kind) {
      case ColumnKind::Continuous: return basis.size();
      case ColumnKind::Binary: return 1;
      case ColumnKind::Multinomial: return static_cast<std::size_t>(levels - 1);
    }
    return 0;
  }

  void eval(double x, double* out) const {
    switch (kind) {
      case ColumnKind::Continuous:
        basis.eval(x, out);
        break;
      case ColumnKind::Binary:
        out[0] = x;
        break;
      case ColumnKind::Multinomial:
        for (int level = 2; level <= levels; ++level) {
          out[level - 2] = (x == static_cast<double>(level)) ? 1.0 : 0.0;
        }
        break;
    }
  }
};

class SplineModel final : public detail::ModelImpl {
 public:
  SplineModel(std::vector<FeatureBlock> blocks, Eigen::VectorXd coef)
      : blocks_(std::move(blocks)), coef_(std::move(coef)) {}

  std::string family() const override { return "spline"; }

  void predict(const Dataset& rows, std::vector<double>& out) const override {
    std::size_t n = rows.n_rows();
    out.assign(n, coef_[0]);
    std::vector<double> buf;
    std::size_t offset = 1;
    for (const auto& block : blocks_) {
      const std::vector<double>& col = rows.column(rows.index_of(block.name));
      std::size_t w = block.width();
      buf.resize(w);
      for (std::size_t i = 0; i < n; ++i) {
        block.eval(col[i], buf.data());
        double acc = 0.0;
        for (std::size_t j = 0; j < w; ++j) {
          acc += coef_[static_cast<Eigen::Index>(offset + j)] * buf[j];
        }
        out[i] += acc;
      }
      offset += w;
    }
  }

  bool depends_on(std::string_view column) const override {
    for (const auto& block : blocks_) {
      if (block.name == column) return true;
    }
    return false;
  }

  std::string dump() const override {
    std::ostringstream os;
    os << "spline\n(intercept) " << coef_[0] << '\n';
    std::size_t offset = 1;
    for (const auto& block : blocks_) {
      for (std::size_t j = 0; j < block.width(); ++j) {
        os << block.name << '[' << j << "] "
           << coef_[static_cast<Eigen::Index>(offset + j)] << '\n';
      }
      offset += block.width();
    }
    return os.str();
  }

 private:
  std::vector<FeatureBlock> blocks_;
  Eigen::VectorXd coef_;
};

}  // namespace

FittedModel fit_spline(const AdditiveSplineSpec& spec, const Dataset& train,
                       const std::vector<std::string>& exclude) {
  if (spec.basis_per_var < 1) {
    throw std::invalid_argument("spline: basis_per_var must be >= 1");
  }
  if (!(spec.ridge >= 0.0)) {
    throw std::invalid_argument("spline: ridge must be >= 0");
  }

  std::vector<FeatureBlock> blocks;
  for (std::size_t c : train.predictor_indices()) {
    const ColumnMeta& m = train.meta(c);
    if (std::find(exclude.begin(), exclude.end(), m.name) != exclude.end()) {
      continue;
    }
    FeatureBlock block;
    block.name = m.name;
    block.kind = m.kind;
    block.levels = m.levels;
    if (m.kind == ColumnKind::Continuous) {
      block.basis = make_basis(train.column(c), spec.basis_per_var);
    }
    blocks.push_back(std::move(block));
  }

  std::size_t p = 1;
  for (const auto& b : blocks) p += b.width();
  auto pi = static_cast<Eigen::Index>(p);
  std::size_t n = train.n_rows();
  const std::vector<double>& y = train.outcome();

  // Blockwise normal equations; keeps memory flat for wide designs.
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(pi, pi);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(pi);
  constexpr std::size_t kRowsPerBlock = 2048;
  Eigen::MatrixXd design(std::min(kRowsPerBlock, n), pi);
  std::vector<const std::vector<double>*> cols;
  cols.reserve(blocks.size());
  for (const auto& b : blocks) {
    cols.push_back(&train.column(train.index_of(b.name)));
  }
  std::vector<double> buf(64);
  for (std::size_t start = 0; start < n; start += kRowsPerBlock) {
    std::size_t len = std::min(kRowsPerBlock, n - start);
    auto rows = design.topRows(static_cast<Eigen::Index>(len));
    rows.col(0).setOnes();
    std::size_t offset = 1;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      std::size_t w = blocks[b].width();
      buf.resize(std::max(buf.size(), w));
      for (std::size_t i = 0; i < len; ++i) {
        blocks[b].eval((*cols[b])[start + i], buf.data());
        for (std::size_t j = 0; j < w; ++j) {
          rows(static_cast<Eigen::Index>(i),
               static_cast<Eigen::Index>(offset + j)) = buf[j];
        }
      }
      offset += w;
    }
    xtx.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose(), 1.0);
    xty.noalias() += rows.transpose() *
                     Eigen::Map<const Eigen::VectorXd>(
                         y.data() + start, static_cast<Eigen::Index>(len));
  }
  xtx.triangularView<Eigen::Upper>() = xtx.transpose();

  // Penalty on everything but the intercept.
  for (Eigen::Index j = 1; j < pi; ++j) xtx(j, j) += spec.ridge;

  bool ridge_fallback = false;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  Eigen::VectorXd coef = ldlt.solve(xty);
  double rel_err = (xtx.selfadjointView<Eigen::Lower>() * coef - xty).norm() /
                   std::max(1.0, xty.norm());
  if (ldlt.info() != Eigen::Success || !coef.allFinite() || rel_err > 1e-5) {
    ridge_fallback = true;
    double bump = 1e-6 * (xtx.trace() / static_cast<double>(p) + 1.0);
    Eigen::MatrixXd reg = xtx;
    reg.diagonal().array() += bump;
    coef = Eigen::LDLT<Eigen::MatrixXd>(reg).solve(xty);
  }

  auto model = std::make_shared<SplineModel>(std::move(blocks), std::move(coef));
  model->summary.n_train = n;
  model->summary.ridge_fallback = ridge_fallback;
  FittedModel fitted{model};
  model->summary.train_mse = mse(fitted, train);
  return fitted;
}

}  // namespace vimlab
