#include "vimlab/truth.hpp"

#include <cmath>
#include <stdexcept>

#include "vimlab/parallel.hpp"

namespace vimlab {

namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr std::uint64_t kChunkData = 11;
constexpr std::uint64_t kChunkPair = 12;
constexpr std::uint64_t kChunkCond = 13;

bool is_noise_name(const std::string& predictor, int* index_out = nullptr) {
  if (predictor.size() < 2 || predictor[0] != 'X') return false;
  int k = 0;
  for (std::size_t i = 1; i < predictor.size(); ++i) {
    if (predictor[i] < '0' || predictor[i] > '9') return false;
    k = k * 10 + (predictor[i] - '0');
  }
  if (index_out) *index_out = k;
  return k >= 6;
}

void check_known_predictor(const std::string& predictor,
                           const ScenarioSpec& scenario) {
  for (const auto& name : scenario_predictor_names(scenario)) {
    if (name == predictor) return;
  }
  int k = 0;
  if (is_noise_name(predictor, &k)) return;  // any noise index is fine
  throw std::invalid_argument("unknown predictor '" + predictor + "'");
}

// Welford moments with a deterministic pairwise merge (Chan et al.), applied
// in fixed chunk order so the result is independent of the worker count.
struct RawMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  void merge(const RawMoments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    double d = o.mean - mean;
    double combined_mean = (na * mean + nb * o.mean) / (na + nb);
    m2 = m2 + o.m2 + d * d * na * nb / (na + nb);
    mean = combined_mean;
    n += o.n;
  }
  double se() const {
    if (n < 2) return 0.0;
    double var = m2 / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
  }
};

struct ChunkStats {
  RawMoments sq_change;
  RawMoments orig_err;
};

/// Shared population-MC loop; `draw_switch(chunk_data, rng)` supplies the
/// switched values for the predictor of interest.
template <class DrawSwitch>
TruthReport population_truth(const std::string& predictor,
                             const ScenarioSpec& scenario, std::size_t n_pop,
                             RngStream rng, int workers,
                             DrawSwitch&& draw_switch) {
  if (n_pop < 10000) {
    throw std::invalid_argument("population truth: n_pop must be >= 10^4");
  }
  check_known_predictor(predictor, scenario);

  // Only the columns the response touches are needed; keep the requested
  // predictor when it is a noise column.
  ScenarioSpec local = scenario;
  int noise_index = 0;
  local.n_noise =
      is_noise_name(predictor, &noise_index) ? noise_index - 5 : 0;

  std::size_t n_chunks = (n_pop + kChunk - 1) / kChunk;
  RawMoments sq_change, orig_err;
  parallel_ordered<ChunkStats>(
      n_chunks, workers,
      [&](std::size_t c) {
        std::size_t len = std::min(kChunk, n_pop - c * kChunk);
        Dataset chunk = generate(len, local, rng.derive(kChunkData, c));
        std::vector<double> f0 = mean_response_column(chunk);
        std::vector<double> switched =
            draw_switch(chunk, rng.derive(kChunkPair, c),
                        rng.derive(kChunkCond, c));
        std::vector<double> f0_sw =
            mean_response_column(chunk, predictor, switched);
        const std::vector<double>& y = chunk.outcome();

        ChunkStats stats;
        for (std::size_t i = 0; i < len; ++i) {
          double d = f0_sw[i] - f0[i];
          stats.sq_change.add(d * d);
          double e = y[i] - f0[i];
          stats.orig_err.add(e * e);
        }
        return stats;
      },
      [&](std::size_t, ChunkStats&& stats) {
        sq_change.merge(stats.sq_change);
        orig_err.merge(stats.orig_err);
      });

  TruthReport report;
  report.predictor = predictor;
  report.method = TruthMethod::MonteCarlo;
  report.n_pop = n_pop;
  report.e_orig = orig_err.mean;
  report.mi = sq_change.mean;
  report.e_switch = report.e_orig + report.mi;
  report.mc_se = sq_change.se();
  return report;
}

}  // namespace

TruthReport true_mvim(const std::string& predictor, const ScenarioSpec& scenario,
                      std::size_t n_pop, RngStream rng, int workers) {
  return population_truth(
      predictor, scenario, n_pop, rng, workers,
      [&](const Dataset& chunk, RngStream pair_rng, RngStream) {
        // Independent replicate: the value held by a uniformly drawn other row.
        const std::vector<double>& col =
            chunk.column(chunk.index_of(predictor));
        std::size_t n = chunk.n_rows();
        std::vector<double> switched(n);
        for (std::size_t i = 0; i < n; ++i) {
          std::size_t j = static_cast<std::size_t>(pair_rng.below(n - 1));
          if (j >= i) ++j;
          switched[i] = col[j];
        }
        return switched;
      });
}

TruthReport true_cvim(const std::string& predictor, const ScenarioSpec& scenario,
                      std::size_t n_pop, RngStream rng, int workers) {
  if (predictor != "X1" || scenario.x1_law != X1Law::LinearParents) {
    throw std::invalid_argument(
        "true_cvim: conditional law known only for X1 under linear-parents "
        "scenarios");
  }
  TruthReport report = population_truth(
      predictor, scenario, n_pop, rng, workers,
      [&](const Dataset& chunk, RngStream, RngStream cond_rng) {
        const auto& p = scenario.parents;
        const auto& c1 = chunk.column(chunk.index_of("C1"));
        const auto& x2 = chunk.column(chunk.index_of("X2"));
        const auto& x3 = chunk.column(chunk.index_of("X3"));
        const auto& x4 = chunk.column(chunk.index_of("X4"));
        const auto& x5 = chunk.column(chunk.index_of("X5"));
        std::size_t n = chunk.n_rows();
        std::vector<double> switched(n);
        for (std::size_t i = 0; i < n; ++i) {
          switched[i] = p.intercept + p.on_c1 * c1[i] + p.on_x2 * x2[i] +
                        p.on_x3 * x3[i] + p.on_x4 * x4[i] + p.on_x5 * x5[i] +
                        cond_rng.normal(0.0, p.nu_sd);
        }
        return switched;
      });
  report.ci = report.mi;
  return report;
}

bool analytic_available(const std::string& predictor) {
  return predictor == "X1" || predictor == "X5" || is_noise_name(predictor);
}

TruthReport analytic_truths(const std::string& predictor,
                            const ScenarioSpec& scenario) {
  check_known_predictor(predictor, scenario);
  TruthReport report;
  report.predictor = predictor;
  report.method = TruthMethod::Analytic;
  report.e_orig = 1.0;  // Var of the outcome noise

  if (predictor == "X1") {
    // (2 - 4*C1)^2 is identically 4, so the squared mean-response change is
    // 4*(X1' - X1)^2 with E(X1' - X1)^2 = 2*Var(X1).
    report.mi = 8.0 * scenario.x1_variance();
    report.ci = 8.0 * scenario.x1_conditional_variance();
  } else if (predictor == "X5") {
    report.mi = 8.0;  // coefficient -2, unit variance
  } else if (is_noise_name(predictor)) {
    report.mi = 0.0;
    report.ci = 0.0;
  } else {
    throw std::invalid_argument("analytic_truths: no closed form for '" +
                                predictor + "'");
  }
  report.e_switch = report.e_orig + report.mi;
  return report;
}

double r_squared_true(const std::string& predictor,
                      const ScenarioSpec& scenario) {
  if (predictor != "X1") {
    if (is_noise_name(predictor)) return 0.0;
    throw std::invalid_argument(
        "r_squared_true: known structure only for X1 (and noise predictors)");
  }
  switch (scenario.x1_law) {
    case X1Law::Independent:
      return 0.0;
    case X1Law::SimpleCorrelation:
      return scenario.rho * scenario.rho;
    case X1Law::LinearParents:
      return 1.0 - scenario.x1_conditional_variance() / scenario.x1_variance();
  }
  return 0.0;
}

}  // namespace vimlab
