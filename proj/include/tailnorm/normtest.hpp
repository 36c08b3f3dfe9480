#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tailnorm/parallel.hpp"
#include "tailnorm/rng.hpp"

namespace tailnorm {

double normal_pdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);
/// P(|Z| >= |z|) for standard normal Z.
double two_sided_normal_pvalue(double z);

/// Central moments with divisor n; kurtosis is raw (normal = 3).
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

/// Requires at least 4 values and nonzero variance.
Moments moment_stats(std::span<const double> xs);

enum class NormalityMethod { JarqueBera, Lilliefors, MseBiasT };
enum class PValueMethod { MonteCarlo, Asymptotic, Exact };

std::string_view to_string(NormalityMethod m);
std::string_view to_string(PValueMethod m);

struct NormalityReport {
  double statistic = 0.0;
  double pvalue = 1.0;
  NormalityMethod method = NormalityMethod::JarqueBera;
  std::size_t n = 0;
  PValueMethod pvalue_method = PValueMethod::MonteCarlo;
};

/// JB = (n/6)(skew^2 + (kurt - 3)^2 / 4).
double jarque_bera_statistic(std::span<const double> xs);
double jarque_bera_statistic(std::size_t n, double skewness, double kurtosis);

/// Kolmogorov-Smirnov distance to N(xbar, s^2) with s the (n-1)-divisor sd,
/// taking both one-sided limits of the empirical CDF.
double lilliefors_statistic(std::span<const double> xs);

enum class NullStatistic { JarqueBera, Lilliefors };

/// Sorted Monte Carlo null distribution of a normality statistic at one sample
/// size. Reusable across every test at that size.
class NullTable {
 public:
  NullTable(NullStatistic kind, std::size_t n, std::vector<double> statistics);

  /// Simulates `reps` standard-normal samples of size n; substreams keyed by `key`.
  static NullTable simulate(NullStatistic kind, std::size_t n, std::size_t reps, std::uint64_t key,
                            const ExecPolicy& exec = {});

  /// (1 + #{null >= observed}) / (reps + 1).
  double upper_pvalue(double observed) const;

  NullStatistic kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t reps() const noexcept { return sorted_.size(); }

 private:
  NullStatistic kind_;
  std::size_t n_;
  std::vector<double> sorted_;
};

/// Requires at least 8 values. Asymptotic p-value is the chi-square(2) upper tail.
NormalityReport jarque_bera(std::span<const double> xs, PValueMethod pvalue_method,
                            std::size_t mc_reps, Stream& rng);
NormalityReport jarque_bera(std::span<const double> xs, const NullTable& null);

/// Requires at least 5 values. p-value by Monte Carlo only.
NormalityReport lilliefors(std::span<const double> xs, std::size_t mc_reps, Stream& rng);
NormalityReport lilliefors(std::span<const double> xs, const NullTable& null);

/// Bias/MSE decomposition of m simulated estimates against the true value.
/// S2 uses divisor m - 1, MSE divisor m, so m MSE = (m - 1) S2 + m B^2.
struct SimulationSummary {
  std::size_t m = 0;
  double theta0 = 0.0;
  double mean_est = 0.0;
  double S2 = 0.0;
  double bias = 0.0;
  double mse = 0.0;
  double t = 0.0;         // sqrt(m - 1) B / sqrt(MSE - B^2)
  double z_pvalue = 1.0;  // two-sided, standard normal reference

  double rmse() const;
};

/// Requires m >= 10 finite estimates. Throws DegenerateSampleError if MSE - B^2 <= 0.
SimulationSummary mse_bias_summary(std::span<const double> estimates, double theta0);
NormalityReport mse_bias_report(const SimulationSummary& summary);

struct PublishedZ {
  double z = 0.0;
  std::optional<double> z_star;
};

/// z = sqrt(m - 1) B / sqrt(RMSE^2 - B^2); z* rescales to m_target replicates.
/// Throws DomainError unless rmse > |bias|.
PublishedZ z_from_published(double bias, double rmse, std::size_t m,
                            std::optional<std::size_t> m_target = std::nullopt);

/// sqrt(m - 1) * mean(t) / sqrt(S_t^2), S_t^2 with divisor m. Null: t with m - 1 df.
double t_star(std::span<const double> ts);

struct EdgeworthSpec {
  double rho3 = 0.0;  // standardized third cumulant
  double rho4 = 0.0;  // standardized fourth cumulant
  std::size_t n = 1;
};

struct EdgeworthValue {
  double density = 0.0;
  bool negative = false;  // the expansion is not a true density and can dip below zero
};

/// Probabilists' Hermite polynomials He_r(z), r <= 6.
double hermite(int order, double z);

/// phi(z) (1 + rho3 H3 / (6 sqrt n) + (3 rho4 H4 + rho3^2 H6) / (72 n)).
EdgeworthValue edgeworth_density(double z, const EdgeworthSpec& spec);

}  // namespace tailnorm
