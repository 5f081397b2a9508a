#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vimlab/dataset.hpp"
#include "vimlab/rng.hpp"

namespace vimlab {

enum class X1Law { Independent, SimpleCorrelation, LinearParents };

/// X1 = intercept + on_c1*C1 + on_x2*X2 + ... + on_x5*X5 + nu,
/// nu ~ N(0, nu_sd^2).
struct LinearParentsLaw {
  double intercept = -0.5;
  double on_c1 = 1.0;
  double on_x2 = -0.5;
  double on_x3 = 0.5;
  double on_x4 = 0.3;
  double on_x5 = -0.3;
  double nu_sd = 1.0;
};

/// One synthetic population configuration: how X1 depends on the other
/// predictors, how many pure-noise predictors ride along, and the seed the
/// CLI uses when deriving streams for it.
struct ScenarioSpec {
  std::string name = "independent";
  X1Law x1_law = X1Law::Independent;
  double rho = 0.9;  // SimpleCorrelation: corr(X1, X5)
  LinearParentsLaw parents;
  int n_noise = 45;
  std::uint64_t seed = 0;

  static ScenarioSpec independent();
  static ScenarioSpec simple_correlation();
  static ScenarioSpec multivariate();  // nu_sd = sqrt(0.07)
  static ScenarioSpec weak();          // nu_sd = 1
  static ScenarioSpec moderate();      // nu_sd = 0.5075
  static ScenarioSpec strong();        // nu_sd = 0.2575
  static ScenarioSpec by_name(std::string_view name);
  static const std::vector<std::string>& known_names();

  double x1_variance() const;
  /// Var(X1 | everything else): nu_sd^2, 1-rho^2, or 1.
  double x1_conditional_variance() const;
};

/// True conditional mean of the outcome given the nine relevant predictors.
double mean_response(double x1, double x2, double x3, double x4, double x5,
                     double c1, double c2, double u1, double u2);

/// mean_response evaluated on every row; `swap_col`/`swap_values`, when given,
/// replace one column for the evaluation only.
std::vector<double> mean_response_column(const Dataset& data);
std::vector<double> mean_response_column(const Dataset& data,
                                         std::string_view swap_col,
                                         const std::vector<double>& swap_values);

/// Draws a dataset of n rows: X2..X5 iid N(0,1); C1 Bernoulli(0.5);
/// C2 uniform on {1,2,3}; U1,U2 Uniform(-1,1); noise predictors iid N(0,1);
/// X1 per scenario law; outcome Y = mean_response + N(0,1) noise when
/// requested. Deterministic in (n, scenario, rng).
Dataset generate(std::size_t n, const ScenarioSpec& scenario, RngStream rng,
                 bool with_outcome = true);

/// Predictor names a scenario produces, in dataset order.
std::vector<std::string> scenario_predictor_names(const ScenarioSpec& scenario);

}  // namespace vimlab
