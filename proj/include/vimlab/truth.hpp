#pragma once

#include <optional>
#include <string>

#include "vimlab/rng.hpp"
#include "vimlab/scenario.hpp"

namespace vimlab {

enum class TruthMethod { MonteCarlo, Analytic };

/// Ground-truth importance values for one predictor under one scenario,
/// from the population Monte-Carlo oracle or from closed forms.
struct TruthReport {
  std::string predictor;
  double e_orig = 1.0;
  double e_switch = 1.0;
  double mi = 0.0;
  std::optional<double> ci;
  double mc_se = 0.0;
  TruthMethod method = TruthMethod::MonteCarlo;
  std::size_t n_pop = 0;
};

/// Population Monte-Carlo marginal importance: each row's predictor value is
/// switched with that of a uniformly drawn other row and the change in the
/// true mean response is squared and averaged.
TruthReport true_mvim(const std::string& predictor, const ScenarioSpec& scenario,
                      std::size_t n_pop, RngStream rng, int workers = 1);

/// Conditional counterpart: the switch draws from the predictor's true
/// conditional law given the realized co-predictors. Only defined where that
/// law is known (X1 under linear-parents scenarios).
TruthReport true_cvim(const std::string& predictor, const ScenarioSpec& scenario,
                      std::size_t n_pop, RngStream rng, int workers = 1);

/// Closed forms where the predictor enters the response linearly or not at
/// all; throws for predictors with nonlinear terms.
TruthReport analytic_truths(const std::string& predictor,
                            const ScenarioSpec& scenario);
bool analytic_available(const std::string& predictor);

/// 1 - Var(X1 | rest) / Var(X1) from the scenario's known structure.
double r_squared_true(const std::string& predictor,
                      const ScenarioSpec& scenario);

}  // namespace vimlab
