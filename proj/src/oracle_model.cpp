#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vimlab/model.hpp"

namespace vimlab {

namespace {

// One regressor of the correctly specified response model, together with the
// source columns it is built from (for leave-one-covariate-out refits).
struct OracleTerm {
  std::string label;
  std::vector<std::string> sources;
  double (*eval)(double x1, double x2, double x3, double x4, double x5,
                 double c1, double c2, double u1, double u2);
};

const std::vector<OracleTerm>& oracle_terms() {
  static const std::vector<OracleTerm> terms = {
      {"X1", {"X1"}, [](double x1, double, double, double, double, double,
                        double, double, double) { return x1; }},
      {"X1:C1",
       {"X1", "C1"},
       [](double x1, double, double, double, double, double c1, double, double,
          double) { return x1 * c1; }},
      {"C1", {"C1"}, [](double, double, double, double, double, double c1,
                        double, double, double) { return c1; }},
      {"log_abs_x2x3",
       {"X2", "X3"},
       [](double, double x2, double x3, double, double, double, double, double,
          double) { return std::log(std::abs(x2 * x3) + 0.1); }},
      {"shifted_cube_x4",
       {"X4"},
       [](double, double, double, double x4, double, double, double, double,
          double) { return std::pow(x4 - 0.5, 3); }},
      {"X5", {"X5"}, [](double, double, double, double, double x5, double,
                        double, double, double) { return x5; }},
      {"sin_u1u2",
       {"U1", "U2"},
       [](double, double, double, double, double, double, double, double u1,
          double u2) { return std::sin(M_PI * u1 * u2); }},
      {"C2==2", {"C2"}, [](double, double, double, double, double, double,
                           double c2, double, double) {
         return c2 == 2.0 ? 1.0 : 0.0;
       }},
      {"C2==3", {"C2"}, [](double, double, double, double, double, double,
                           double c2, double, double) {
         return c2 == 3.0 ? 1.0 : 0.0;
       }},
  };
  return terms;
}

struct OracleInputs {
  const std::vector<double>*x1, *x2, *x3, *x4, *x5, *c1, *c2, *u1, *u2;

  explicit OracleInputs(const Dataset& d)
      : x1(&d.column(d.index_of("X1"))),
        x2(&d.column(d.index_of("X2"))),
        x3(&d.column(d.index_of("X3"))),
        x4(&d.column(d.index_of("X4"))),
        x5(&d.column(d.index_of("X5"))),
        c1(&d.column(d.index_of("C1"))),
        c2(&d.column(d.index_of("C2"))),
        u1(&d.column(d.index_of("U1"))),
        u2(&d.column(d.index_of("U2"))) {}

  double term(const OracleTerm& t, std::size_t i) const {
    return t.eval((*x1)[i], (*x2)[i], (*x3)[i], (*x4)[i], (*x5)[i], (*c1)[i],
                  (*c2)[i], (*u1)[i], (*u2)[i]);
  }
};

class OracleModel final : public detail::ModelImpl {
 public:
  OracleModel(std::vector<OracleTerm> terms, Eigen::VectorXd coef)
      : terms_(std::move(terms)), coef_(std::move(coef)) {}

  std::string family() const override { return "oracle"; }

  void predict(const Dataset& rows, std::vector<double>& out) const override {
    OracleInputs in(rows);
    std::size_t n = rows.n_rows();
    out.assign(n, coef_[0]);
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      double beta = coef_[static_cast<Eigen::Index>(t) + 1];
      for (std::size_t i = 0; i < n; ++i) out[i] += beta * in.term(terms_[t], i);
    }
  }

  bool depends_on(std::string_view column) const override {
    for (const auto& t : terms_) {
      for (const auto& s : t.sources) {
        if (s == column) return true;
      }
    }
    return false;
  }

  std::string dump() const override {
    std::ostringstream os;
    os << "oracle\n(intercept) " << coef_[0] << '\n';
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      os << terms_[t].label << ' ' << coef_[static_cast<Eigen::Index>(t) + 1]
         << '\n';
    }
    return os.str();
  }

 private:
  std::vector<OracleTerm> terms_;
  Eigen::VectorXd coef_;
};

}  // namespace

FittedModel fit_oracle(const Dataset& train,
                       const std::vector<std::string>& exclude) {
  std::vector<OracleTerm> terms;
  for (const auto& t : oracle_terms()) {
    bool excluded = false;
    for (const auto& s : t.sources) {
      if (std::find(exclude.begin(), exclude.end(), s) != exclude.end()) {
        excluded = true;
        break;
      }
    }
    if (!excluded) terms.push_back(t);
  }

  OracleInputs in(train);
  const std::vector<double>& y = train.outcome();
  auto n = static_cast<Eigen::Index>(train.n_rows());
  auto p = static_cast<Eigen::Index>(terms.size()) + 1;

  Eigen::MatrixXd design(n, p);
  design.col(0).setOnes();
  for (Eigen::Index t = 0; t + 1 < p; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      design(i, t + 1) = in.term(terms[static_cast<std::size_t>(t)],
                                 static_cast<std::size_t>(i));
    }
  }

  Eigen::MatrixXd xtx = design.transpose() * design;
  Eigen::VectorXd xty =
      design.transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), n);

  bool ridge_fallback = false;
  Eigen::VectorXd coef;
  {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    coef = ldlt.solve(xty);
    double rel_err = (xtx * coef - xty).norm() / std::max(1.0, xty.norm());
    if (ldlt.info() != Eigen::Success || !coef.allFinite() || rel_err > 1e-6) {
      ridge_fallback = true;
      Eigen::MatrixXd reg = xtx;
      double bump = 1e-8 * (xtx.trace() / static_cast<double>(p) + 1.0);
      reg.diagonal().array() += bump;
      coef = Eigen::LDLT<Eigen::MatrixXd>(reg).solve(xty);
    }
  }

  auto model = std::make_shared<OracleModel>(std::move(terms), std::move(coef));
  model->summary.n_train = train.n_rows();
  model->summary.ridge_fallback = ridge_fallback;
  FittedModel fitted{model};
  model->summary.train_mse = mse(fitted, train);
  return fitted;
}

/// Fitted coefficient lookup for oracle models (tests and model dumps).
double oracle_coefficient(const FittedModel& model, std::string_view label) {
  // The dump carries "label value" lines; parse rather than expose internals.
  std::istringstream is(model.dump());
  std::string header;
  std::getline(is, header);
  if (header != "oracle") {
    throw std::invalid_argument("oracle_coefficient: not an oracle model");
  }
  std::string word;
  double value;
  while (is >> word >> value) {
    if (word == label) return value;
  }
  throw std::invalid_argument("oracle_coefficient: no term '" +
                              std::string(label) + "'");
}

}  // namespace vimlab
