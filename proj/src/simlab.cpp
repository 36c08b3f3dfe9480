#include "tailnorm/simlab.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "csv.hpp"
#include "tailnorm/error.hpp"
#include "tailnorm/kernels.hpp"

namespace tailnorm {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over the running hash
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t null_key(std::uint64_t master, std::uint64_t study, std::size_t n) {
  return mix(mix(master, study), n);
}

class NullCache {
 public:
  NullCache(std::uint64_t master, std::size_t reps, const ExecPolicy& exec)
      : master_(master), reps_(reps), exec_(exec) {}

  const NullTable& get(NullStatistic kind, std::size_t n) {
    const auto id = std::make_pair(kind, n);
    auto it = tables_.find(id);
    if (it == tables_.end()) {
      const std::uint64_t study = kind == NullStatistic::JarqueBera ? kStudyNullJb : kStudyNullLilliefors;
      it = tables_.emplace(id, NullTable::simulate(kind, n, reps_, null_key(master_, study, n), exec_)).first;
    }
    return it->second;
  }

 private:
  std::uint64_t master_;
  std::size_t reps_;
  ExecPolicy exec_;
  std::map<std::pair<NullStatistic, std::size_t>, NullTable> tables_;
};

}  // namespace

void ExperimentConfig::validate() const {
  if (m < 100) throw std::invalid_argument("experiment needs m >= 100 replicates");
  if (sample_sizes.empty()) throw std::invalid_argument("experiment needs at least one sample size");
  for (std::size_t n : sample_sizes)
    if (n < 10) throw std::invalid_argument("sample sizes must be at least 10");
  if (methods.empty()) throw std::invalid_argument("experiment needs at least one estimator");
  if (mc_pvalue_reps < 1) throw std::invalid_argument("mc_pvalue_reps must be positive");
  if (bootstrap_reps < 50) throw std::invalid_argument("bootstrap_reps must be at least 50");
  params().validate();
}

EstimateRecord default_replicate_estimate(Method method, std::size_t n, const GpdParams& truth, Stream& rng) {
  const Sample raw = sample_gpd(n, truth, rng);
  return estimate_flagged(method, shift_to_two_param(raw).sample);
}

RejectionReplicate zs_bootstrap_replicate(std::size_t boot_reps) {
  return [boot_reps](std::size_t n, const GpdParams& truth, Stream& rng) -> std::optional<ZDraw> {
    const Sample shifted = shift_to_two_param(sample_gpd(n, truth, rng)).sample;
    const EstimateRecord fit = estimate_flagged(Method::ZS, shifted);
    if (!fit.converged) return std::nullopt;
    const double sd = bootstrap_sd(shifted, Method::ZS, boot_reps, rng, ExecPolicy::serial());
    return ZDraw{fit.xi_hat, sd};
  };
}

std::uint64_t cell_key(std::uint64_t study, std::size_t n, const GpdParams& truth) {
  std::uint64_t h = mix(study, n);
  h = mix(h, key_of(truth.xi));
  h = mix(h, key_of(truth.sigma));
  return mix(h, key_of(truth.mu));
}

CellResult summarize_cell(std::size_t n, Method method, std::span<const double> estimates, double xi0,
                          const NullTable& jb_null, const NullTable& lf_null) {
  CellResult c;
  c.n = n;
  c.method = method;
  const Moments mo = moment_stats(estimates);
  c.skewness = mo.skewness;
  c.kurtosis = mo.kurtosis;
  c.jb_pvalue = jarque_bera(estimates, jb_null).pvalue;
  c.lilliefors_pvalue = lilliefors(estimates, lf_null).pvalue;
  c.summary = mse_bias_summary(estimates, xi0);
  c.t_stat = c.summary.t;
  c.t_pvalue = c.summary.z_pvalue;
  return c;
}

std::vector<CellResult> run_normality_grid(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  return run_normality_grid(cfg, default_replicate_estimate, exec);
}

std::vector<CellResult> run_normality_grid(const ExperimentConfig& cfg, const ReplicateEstimator& estimator,
                                           const ExecPolicy& exec) {
  cfg.validate();
  const GpdParams truth = cfg.params();
  NullCache nulls(cfg.master_seed, cfg.mc_pvalue_reps, exec);
  std::vector<CellResult> out;
  for (std::size_t n : cfg.sample_sizes) {
    const std::uint64_t cell = cell_key(kStudyNormality, n, truth);
    const auto records =
        kernels::replicate_estimates(estimator, cfg.methods, n, truth, cfg.m, cfg.master_seed, cell, exec);
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
      std::vector<double> xi;
      xi.reserve(cfg.m);
      for (std::size_t j = 0; j < cfg.m; ++j) {
        const EstimateRecord& r = records[j * cfg.methods.size() + i];
        if (r.converged && std::isfinite(r.xi_hat)) xi.push_back(r.xi_hat);
      }
      const std::size_t failed = cfg.m - xi.size();
      if (failed * 20 > cfg.m) {
        throw ConvergenceError(std::string(to_string(cfg.methods[i])) + " at n=" + std::to_string(n) + ": " +
                               std::to_string(failed) + " of " + std::to_string(cfg.m) + " replicates failed");
      }
      CellResult c = summarize_cell(n, cfg.methods[i], xi, cfg.xi0, nulls.get(NullStatistic::JarqueBera, xi.size()),
                                    nulls.get(NullStatistic::Lilliefors, xi.size()));
      c.failed = failed;
      out.push_back(c);
    }
  }
  return out;
}

RejectionResult summarize_rejections(std::size_t n, std::span<const double> z, std::size_t failed) {
  if (z.size() < 2) throw DegenerateSampleError("rejection summary needs at least two z values");
  RejectionResult r;
  r.n = n;
  r.used = z.size();
  r.failed = failed;
  const double used = static_cast<double>(z.size());
  r.mean_z = std::accumulate(z.begin(), z.end(), 0.0) / used;
  double ss = 0.0;
  std::size_t rejected = 0;
  for (double v : z) {
    ss += (v - r.mean_z) * (v - r.mean_z);
    if (std::abs(v) > kCritical5pct) ++rejected;
  }
  r.var_z = ss / (used - 1.0);
  r.reject_rate = static_cast<double>(rejected) / used;
  return r;
}

std::vector<RejectionResult> run_rejection_study(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  return run_rejection_study(cfg, zs_bootstrap_replicate(cfg.bootstrap_reps), exec);
}

std::vector<RejectionResult> run_rejection_study(const ExperimentConfig& cfg, const RejectionReplicate& replicate,
                                                 const ExecPolicy& exec) {
  cfg.validate();
  const GpdParams truth = cfg.params();
  std::vector<RejectionResult> out;
  for (std::size_t n : cfg.sample_sizes) {
    const std::uint64_t cell = cell_key(kStudyRejection, n, truth);
    const auto draws = kernels::rejection_draws(replicate, n, truth, cfg.m, cfg.master_seed, cell, exec);
    std::vector<double> z;
    z.reserve(cfg.m);
    for (const auto& d : draws) {
      if (d && d->sd > 0.0 && std::isfinite(d->sd) && std::isfinite(d->xi_hat)) {
        z.push_back((d->xi_hat - cfg.xi0) / d->sd);
      }
    }
    const std::size_t failed = cfg.m - z.size();
    if (failed * 20 > cfg.m) {
      throw ConvergenceError("rejection study at n=" + std::to_string(n) + ": " + std::to_string(failed) + " of " +
                             std::to_string(cfg.m) + " replicates failed");
    }
    out.push_back(summarize_rejections(n, z, failed));
  }
  return out;
}

std::vector<AuditResult> audit_published(const std::vector<AuditRow>& rows, std::optional<std::size_t> m_target) {
  std::vector<AuditResult> out;
  out.reserve(rows.size());
  for (const AuditRow& row : rows) {
    const PublishedZ z = z_from_published(row.bias, row.rmse, row.m, m_target);
    out.push_back({row.label, row.n, z.z, z.z_star});
  }
  return out;
}

std::vector<AuditRow> read_audit_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open audit file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> cols;
  std::vector<AuditRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = csv::split(line);
    if (cols.empty()) {
      for (const char* name : {"label", "n", "bias", "rmse", "m"}) {
        const auto c = csv::column(cells, name);
        if (!c) throw ParseError(std::string("audit header is missing column '") + name + "'", lineno);
        cols.push_back(*c);
      }
      continue;
    }
    if (cells.size() < 5) throw ParseError("audit row has fewer than 5 fields", lineno);
    AuditRow row;
    row.label = cells.at(cols[0]);
    const auto n = csv::to_size(cells.at(cols[1]));
    const auto bias = csv::to_double(cells.at(cols[2]));
    const auto rmse = csv::to_double(cells.at(cols[3]));
    const auto m = csv::to_size(cells.at(cols[4]));
    if (!n || !bias || !rmse || !m) throw ParseError("audit row has a non-numeric field", lineno);
    if (!(*rmse > std::abs(*bias))) throw ParseError("audit row needs rmse > |bias|", lineno);
    row.n = *n;
    row.bias = *bias;
    row.rmse = *rmse;
    row.m = *m;
    rows.push_back(std::move(row));
  }
  if (cols.empty()) throw ParseError("audit file is empty", lineno);
  return rows;
}

}  // namespace tailnorm
