#include "vimlab/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace vimlab {

namespace {

// Stream children for column generation; stable across scenario variants.
constexpr std::uint64_t kColX = 0;        // + k for Xk
constexpr std::uint64_t kColC1 = 2001;
constexpr std::uint64_t kColC2 = 2002;
constexpr std::uint64_t kColU1 = 2003;
constexpr std::uint64_t kColU2 = 2004;
constexpr std::uint64_t kColEps = 2005;
constexpr std::uint64_t kColNu = 2006;

std::vector<double> draw_normals(std::size_t n, RngStream rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

}  // namespace

ScenarioSpec ScenarioSpec::independent() {
  ScenarioSpec s;
  s.name = "independent";
  s.x1_law = X1Law::Independent;
  return s;
}

ScenarioSpec ScenarioSpec::simple_correlation() {
  ScenarioSpec s;
  s.name = "simple";
  s.x1_law = X1Law::SimpleCorrelation;
  s.rho = 0.9;
  return s;
}

namespace {
ScenarioSpec linear_parents_preset(const char* name, double nu_sd) {
  ScenarioSpec s;
  s.name = name;
  s.x1_law = X1Law::LinearParents;
  s.parents.nu_sd = nu_sd;
  return s;
}
}  // namespace

ScenarioSpec ScenarioSpec::multivariate() {
  return linear_parents_preset("multivariate", std::sqrt(0.07));
}
ScenarioSpec ScenarioSpec::weak() { return linear_parents_preset("weak", 1.0); }
ScenarioSpec ScenarioSpec::moderate() {
  return linear_parents_preset("moderate", 0.5075);
}
ScenarioSpec ScenarioSpec::strong() {
  return linear_parents_preset("strong", 0.2575);
}

const std::vector<std::string>& ScenarioSpec::known_names() {
  static const std::vector<std::string> names = {
      "independent", "simple", "multivariate", "weak", "moderate", "strong"};
  return names;
}

ScenarioSpec ScenarioSpec::by_name(std::string_view name) {
  if (name == "independent") return independent();
  if (name == "simple") return simple_correlation();
  if (name == "multivariate") return multivariate();
  if (name == "weak") return weak();
  if (name == "moderate") return moderate();
  if (name == "strong") return strong();
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

double ScenarioSpec::x1_variance() const {
  switch (x1_law) {
    case X1Law::Independent:
    case X1Law::SimpleCorrelation:
      return 1.0;
    case X1Law::LinearParents: {
      const auto& p = parents;
      return 0.25 * p.on_c1 * p.on_c1 + p.on_x2 * p.on_x2 + p.on_x3 * p.on_x3 +
             p.on_x4 * p.on_x4 + p.on_x5 * p.on_x5 + p.nu_sd * p.nu_sd;
    }
  }
  return 1.0;
}

double ScenarioSpec::x1_conditional_variance() const {
  switch (x1_law) {
    case X1Law::Independent:
      return 1.0;
    case X1Law::SimpleCorrelation:
      return 1.0 - rho * rho;
    case X1Law::LinearParents:
      return parents.nu_sd * parents.nu_sd;
  }
  return 1.0;
}

double mean_response(double x1, double x2, double x3, double x4, double x5,
                     double c1, double c2, double u1, double u2) {
  double value = 2.0 * x1 - 4.0 * x1 * c1 + 2.0 * c1 +
                 2.0 * std::log(std::abs(x2 * x3) + 0.1) +
                 std::pow(x4 - 0.5, 3) - 2.0 * x5 +
                 2.0 * std::sin(M_PI * u1 * u2);
  if (c2 == 2.0) value -= 1.0;
  if (c2 == 3.0) value += 2.0;
  return value;
}

namespace {

struct ResponseColumns {
  const std::vector<double>*x1, *x2, *x3, *x4, *x5, *c1, *c2, *u1, *u2;

  explicit ResponseColumns(const Dataset& d)
      : x1(&d.column(d.index_of("X1"))),
        x2(&d.column(d.index_of("X2"))),
        x3(&d.column(d.index_of("X3"))),
        x4(&d.column(d.index_of("X4"))),
        x5(&d.column(d.index_of("X5"))),
        c1(&d.column(d.index_of("C1"))),
        c2(&d.column(d.index_of("C2"))),
        u1(&d.column(d.index_of("U1"))),
        u2(&d.column(d.index_of("U2"))) {}

  void swap(const Dataset& d, std::string_view col,
            const std::vector<double>& values) {
    const std::vector<double>** slot = nullptr;
    if (col == "X1") slot = &x1;
    else if (col == "X2") slot = &x2;
    else if (col == "X3") slot = &x3;
    else if (col == "X4") slot = &x4;
    else if (col == "X5") slot = &x5;
    else if (col == "C1") slot = &c1;
    else if (col == "C2") slot = &c2;
    else if (col == "U1") slot = &u1;
    else if (col == "U2") slot = &u2;
    if (slot) {
      *slot = &values;
    } else {
      d.index_of(col);  // throws for genuinely unknown columns
      // Noise predictor: the response does not depend on it.
    }
  }

  double at(std::size_t i) const {
    return mean_response((*x1)[i], (*x2)[i], (*x3)[i], (*x4)[i], (*x5)[i],
                         (*c1)[i], (*c2)[i], (*u1)[i], (*u2)[i]);
  }
};

std::vector<double> eval_response(const ResponseColumns& cols, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = cols.at(i);
  return out;
}

}  // namespace

std::vector<double> mean_response_column(const Dataset& data) {
  return eval_response(ResponseColumns(data), data.n_rows());
}

std::vector<double> mean_response_column(const Dataset& data,
                                         std::string_view swap_col,
                                         const std::vector<double>& swap_values) {
  if (swap_values.size() != data.n_rows()) {
    throw std::invalid_argument("mean_response_column: swap length mismatch");
  }
  ResponseColumns cols(data);
  cols.swap(data, swap_col, swap_values);
  return eval_response(cols, data.n_rows());
}

std::vector<std::string> scenario_predictor_names(const ScenarioSpec& scenario) {
  std::vector<std::string> names;
  for (int k = 1; k <= 5 + scenario.n_noise; ++k) {
    names.push_back("X" + std::to_string(k));
  }
  names.insert(names.end(), {"C1", "C2", "U1", "U2"});
  return names;
}

Dataset generate(std::size_t n, const ScenarioSpec& scenario, RngStream rng,
                 bool with_outcome) {
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  if (scenario.n_noise < 0) {
    throw std::invalid_argument("generate: n_noise must be >= 0");
  }

  std::vector<ColumnMeta> meta;
  std::vector<std::vector<double>> values;
  auto push = [&](ColumnMeta m, std::vector<double> v) {
    meta.push_back(std::move(m));
    values.push_back(std::move(v));
  };

  std::vector<std::vector<double>> xs(6);  // xs[2..5]
  for (int k = 2; k <= 5; ++k) {
    xs[k] = draw_normals(n, rng.derive(kColX + static_cast<std::uint64_t>(k)));
  }

  std::vector<double> c1(n), c2(n), u1(n), u2(n);
  {
    RngStream rc1 = rng.derive(kColC1);
    RngStream rc2 = rng.derive(kColC2);
    RngStream ru1 = rng.derive(kColU1);
    RngStream ru2 = rng.derive(kColU2);
    for (std::size_t i = 0; i < n; ++i) {
      c1[i] = rc1.uniform() < 0.5 ? 0.0 : 1.0;
      c2[i] = static_cast<double>(1 + rc2.below(3));
      u1[i] = ru1.uniform(-1.0, 1.0);
      u2[i] = ru2.uniform(-1.0, 1.0);
    }
  }

  std::vector<double> x1(n);
  {
    RngStream rx1 = rng.derive(kColX + 1);
    RngStream rnu = rng.derive(kColNu);
    switch (scenario.x1_law) {
      case X1Law::Independent:
        for (std::size_t i = 0; i < n; ++i) x1[i] = rx1.normal();
        break;
      case X1Law::SimpleCorrelation: {
        double resid_sd = std::sqrt(1.0 - scenario.rho * scenario.rho);
        for (std::size_t i = 0; i < n; ++i) {
          x1[i] = scenario.rho * xs[5][i] + resid_sd * rx1.normal();
        }
        break;
      }
      case X1Law::LinearParents: {
        const auto& p = scenario.parents;
        for (std::size_t i = 0; i < n; ++i) {
          x1[i] = p.intercept + p.on_c1 * c1[i] + p.on_x2 * xs[2][i] +
                  p.on_x3 * xs[3][i] + p.on_x4 * xs[4][i] + p.on_x5 * xs[5][i] +
                  rnu.normal(0.0, p.nu_sd);
        }
        break;
      }
    }
  }

  push({"X1", ColumnKind::Continuous, 0, ColumnRole::Predictor}, std::move(x1));
  for (int k = 2; k <= 5; ++k) {
    push({"X" + std::to_string(k), ColumnKind::Continuous, 0,
          ColumnRole::Predictor},
         std::move(xs[k]));
  }
  for (int k = 6; k <= 5 + scenario.n_noise; ++k) {
    push({"X" + std::to_string(k), ColumnKind::Continuous, 0,
          ColumnRole::Predictor},
         draw_normals(n, rng.derive(kColX + static_cast<std::uint64_t>(k))));
  }
  push({"C1", ColumnKind::Binary, 0, ColumnRole::Predictor}, std::move(c1));
  push({"C2", ColumnKind::Multinomial, 3, ColumnRole::Predictor}, std::move(c2));
  push({"U1", ColumnKind::Continuous, 0, ColumnRole::Predictor}, std::move(u1));
  push({"U2", ColumnKind::Continuous, 0, ColumnRole::Predictor}, std::move(u2));

  Dataset predictors(std::move(meta), std::move(values));
  if (!with_outcome) return predictors;

  std::vector<double> y = mean_response_column(predictors);
  {
    RngStream reps = rng.derive(kColEps);
    for (auto& v : y) v += reps.normal();
  }

  std::vector<ColumnMeta> full_meta = predictors.metas();
  std::vector<std::vector<double>> full_values;
  for (std::size_t c = 0; c < predictors.n_cols(); ++c) {
    full_values.push_back(predictors.column(c));
  }
  full_meta.push_back({"Y", ColumnKind::Continuous, 0, ColumnRole::Outcome});
  full_values.push_back(std::move(y));
  return Dataset(std::move(full_meta), std::move(full_values));
}

}  // namespace vimlab
