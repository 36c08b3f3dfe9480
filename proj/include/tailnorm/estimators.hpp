#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "tailnorm/gpd.hpp"
#include "tailnorm/parallel.hpp"
#include "tailnorm/rng.hpp"

namespace tailnorm {

enum class Method { PWM, ML, ZS };

std::string_view to_string(Method m);
/// Accepts "pwm", "ml", "zs" (any case). Throws std::invalid_argument otherwise.
Method parse_method(std::string_view name);

struct EstimateRecord {
  double xi_hat = 0.0;
  double sigma_hat = 0.0;
  Method method = Method::ZS;
  bool converged = false;
};

struct EstimateBatch {
  std::vector<EstimateRecord> records;
  std::size_t n = 0;
  GpdParams true_params;
  Method method = Method::ZS;

  /// xi_hat of converged records, in replicate order.
  std::vector<double> converged_xi() const;
  std::size_t failures() const;
};

// Probability weighted moments. Throws DegenerateSampleError when the
// a0 - 2 a1 denominator vanishes.
EstimateRecord estimate_pwm(const Sample& s);

/// k(b) = -(1/n) sum log(1 - b x_i). Same sign as b for nonnegative data.
double profile_k(double b, std::span<const double> xs);

/// Profile log-likelihood of the two-parameter GPD in b = -xi/sigma:
/// l(b) = n (log(b / k(b)) + k(b) - 1), with the exponential limit
/// n (-log(mean) - 1) at b = 0. Requires b < 1/max(x).
double profile_loglik(double b, std::span<const double> xs);

/// Maximum likelihood via the profile likelihood: 200-point grid then
/// golden-section refinement. The search is confined to xi >= -1, where the
/// GPD likelihood is bounded. Throws ConvergenceError if the maximum sits on
/// the lower edge of the search interval.
EstimateRecord estimate_ml(const Sample& s);

/// Upper end of the ML search interval for a sample whose maximum is 1:
/// min(1 - eps, b with k(b) = 1).
double ml_upper_bound(std::span<const double> unit_max_xs);

/// The empirical Bayes grid: b_j, profile log-likelihoods, normalized weights.
struct ZsGrid {
  std::vector<double> b;
  std::vector<double> loglik;
  std::vector<double> weights;
  double b_hat = 0.0;
};

/// Grid size 20 + floor(sqrt(n)).
std::size_t zs_grid_size(std::size_t n);
ZsGrid zs_grid(const Sample& s);

/// Zhang & Stephens empirical Bayes estimator: likelihood-weighted average of b
/// over a fixed grid, no iteration.
EstimateRecord estimate_zs(const Sample& s);

/// Dispatches on method; throws on degenerate input or non-convergence.
EstimateRecord estimate(Method method, const Sample& s);

/// Batch-safe variant: never throws, reports failures as converged = false.
EstimateRecord estimate_flagged(Method method, const Sample& s) noexcept;

using ShapeEstimator = std::function<EstimateRecord(const Sample&)>;

/// Bootstrap standard deviation (divisor reps - 1) of xi_hat over `reps`
/// with-replacement resamples. Non-converged replicates are skipped; more
/// than 10% failures throws ConvergenceError. Each resample draws from its
/// own substream keyed off one value taken from `rng`, so the result does
/// not depend on the execution policy.
double bootstrap_sd(const Sample& s, Method method, std::size_t reps, Stream& rng,
                    const ExecPolicy& exec = ExecPolicy::serial());
double bootstrap_sd(const Sample& s, const ShapeEstimator& estimator, std::size_t reps, Stream& rng,
                    const ExecPolicy& exec = ExecPolicy::serial());

}  // namespace tailnorm
