#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailnorm/estimators.hpp"
#include "tailnorm/normtest.hpp"
#include "tailnorm/parallel.hpp"

namespace tailnorm {

struct ExperimentConfig {
  double xi0 = 0.5;
  double sigma0 = 1.0;
  double mu0 = 1.0;
  std::vector<std::size_t> sample_sizes{25, 50, 100, 250, 500};
  std::vector<Method> methods{Method::PWM, Method::ZS, Method::ML};
  std::size_t m = 1000;
  std::size_t mc_pvalue_reps = 10000;
  std::size_t bootstrap_reps = 1000;
  std::uint64_t master_seed = 0;

  GpdParams params() const { return {xi0, sigma0, mu0}; }
  /// Throws std::invalid_argument on m < 100, sizes < 10, empty lists or bad parameters.
  void validate() const;
};

struct CellResult {
  std::size_t n = 0;
  Method method = Method::PWM;
  double jb_pvalue = 1.0;
  double lilliefors_pvalue = 1.0;
  double t_stat = 0.0;
  double t_pvalue = 1.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  SimulationSummary summary;
  std::size_t failed = 0;
};

struct RejectionResult {
  std::size_t n = 0;
  double mean_z = 0.0;
  double var_z = 0.0;  // divisor used - 1
  double reject_rate = 0.0;
  std::size_t used = 0;
  std::size_t failed = 0;
};

/// Two-sided 5% standard normal critical value.
inline constexpr double kCritical5pct = 1.959964;

/// Produces one replicate's estimate for a cell. The default draws a
/// three-parameter GPD sample, shifts it by its minimum and estimates.
using ReplicateEstimator =
    std::function<EstimateRecord(Method method, std::size_t n, const GpdParams& truth, Stream& rng)>;

EstimateRecord default_replicate_estimate(Method method, std::size_t n, const GpdParams& truth,
                                          Stream& rng);

/// One replicate of the rejection study: (xi_hat, sd) or nullopt on failure.
struct ZDraw {
  double xi_hat = 0.0;
  double sd = 0.0;
};
using RejectionReplicate =
    std::function<std::optional<ZDraw>(std::size_t n, const GpdParams& truth, Stream& rng)>;

/// ZS fit plus bootstrap sd with `boot_reps` resamples.
RejectionReplicate zs_bootstrap_replicate(std::size_t boot_reps);

/// Stream keys. Replicate j of a cell depends only on (master_seed, cell, j).
std::uint64_t cell_key(std::uint64_t study, std::size_t n, const GpdParams& truth);
inline constexpr std::uint64_t kStudyNormality = 1;
inline constexpr std::uint64_t kStudyRejection = 2;
inline constexpr std::uint64_t kStudyNullJb = 3;
inline constexpr std::uint64_t kStudyNullLilliefors = 4;

/// Summarizes m estimates of one cell: JB, Lilliefors and the MSE/bias t-test.
CellResult summarize_cell(std::size_t n, Method method, std::span<const double> estimates,
                          double xi0, const NullTable& jb_null, const NullTable& lf_null);

std::vector<CellResult> run_normality_grid(const ExperimentConfig& cfg, const ExecPolicy& exec = {});
std::vector<CellResult> run_normality_grid(const ExperimentConfig& cfg,
                                           const ReplicateEstimator& estimator,
                                           const ExecPolicy& exec = {});

/// z_j = (xi_hat_j - xi0) / sd_j over converged replicates; |z| > 1.959964 rejects.
RejectionResult summarize_rejections(std::size_t n, std::span<const double> z, std::size_t failed);

std::vector<RejectionResult> run_rejection_study(const ExperimentConfig& cfg, const ExecPolicy& exec = {});
std::vector<RejectionResult> run_rejection_study(const ExperimentConfig& cfg,
                                                 const RejectionReplicate& replicate,
                                                 const ExecPolicy& exec = {});

struct AuditRow {
  std::string label;
  std::size_t n = 0;
  double bias = 0.0;
  double rmse = 0.0;
  std::size_t m = 0;
};

struct AuditResult {
  std::string label;
  std::size_t n = 0;
  double z = 0.0;
  std::optional<double> z_star;
};

std::vector<AuditResult> audit_published(const std::vector<AuditRow>& rows,
                                         std::optional<std::size_t> m_target);

/// Reads `label,n,bias,rmse,m` rows (header required). Throws ParseError naming the line.
std::vector<AuditRow> read_audit_csv(const std::filesystem::path& path);

}  // namespace tailnorm
