#include "tailnorm/normtest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "tailnorm/error.hpp"
#include "tailnorm/kernels.hpp"

namespace tailnorm {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile needs p in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double two_sided_normal_pvalue(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

Moments moment_stats(std::span<const double> xs) {
  if (xs.size() < 4) throw DegenerateSampleError("moments need at least 4 values");
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw DegenerateSampleError("moments: zero variance");
  return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

std::string_view to_string(NormalityMethod m) {
  switch (m) {
    case NormalityMethod::JarqueBera:
      return "JarqueBera";
    case NormalityMethod::Lilliefors:
      return "Lilliefors";
    case NormalityMethod::MseBiasT:
      return "MseBiasT";
  }
  return "?";
}

std::string_view to_string(PValueMethod m) {
  switch (m) {
    case PValueMethod::MonteCarlo:
      return "MonteCarlo";
    case PValueMethod::Asymptotic:
      return "Asymptotic";
    case PValueMethod::Exact:
      return "Exact";
  }
  return "?";
}

double jarque_bera_statistic(std::size_t n, double skewness, double kurtosis) {
  const double ex = kurtosis - 3.0;
  return static_cast<double>(n) / 6.0 * (skewness * skewness + ex * ex / 4.0);
}

double jarque_bera_statistic(std::span<const double> xs) {
  const Moments mo = moment_stats(xs);
  return jarque_bera_statistic(xs.size(), mo.skewness, mo.kurtosis);
}

double lilliefors_statistic(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 5) throw DegenerateSampleError("Lilliefors needs at least 5 values");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const double nd = static_cast<double>(n);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / nd;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (nd - 1.0));
  if (!(sd > 0.0)) throw DegenerateSampleError("Lilliefors: zero variance");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf((v[i] - mean) / sd);
    const double upper = static_cast<double>(i + 1) / nd - f;
    const double lower = f - static_cast<double>(i) / nd;
    d = std::max({d, upper, lower});
  }
  return d;
}

NullTable::NullTable(NullStatistic kind, std::size_t n, std::vector<double> statistics)
    : kind_(kind), n_(n), sorted_(std::move(statistics)) {
  if (sorted_.empty()) throw std::invalid_argument("null table needs at least one replicate");
  std::sort(sorted_.begin(), sorted_.end());
}

NullTable NullTable::simulate(NullStatistic kind, std::size_t n, std::size_t reps, std::uint64_t key,
                              const ExecPolicy& exec) {
  return NullTable(kind, n, kernels::null_statistics(kind, n, reps, key, exec));
}

double NullTable::upper_pvalue(double observed) const {
  const auto first_ge = std::lower_bound(sorted_.begin(), sorted_.end(), observed);
  const auto at_least = static_cast<double>(sorted_.end() - first_ge);
  return (1.0 + at_least) / (static_cast<double>(sorted_.size()) + 1.0);
}

namespace {

void check_table(const NullTable& null, NullStatistic kind, std::size_t n) {
  if (null.kind() != kind || null.n() != n) {
    throw std::invalid_argument("null table was built for a different statistic or sample size");
  }
}

}  // namespace

NormalityReport jarque_bera(std::span<const double> xs, PValueMethod pvalue_method, std::size_t mc_reps,
                            Stream& rng) {
  if (xs.size() < 8) throw DegenerateSampleError("Jarque-Bera needs at least 8 values");
  switch (pvalue_method) {
    case PValueMethod::Asymptotic: {
      const double jb = jarque_bera_statistic(xs);
      // Chi-square(2) upper tail.
      return {jb, std::exp(-0.5 * jb), NormalityMethod::JarqueBera, xs.size(), PValueMethod::Asymptotic};
    }
    case PValueMethod::MonteCarlo:
      return jarque_bera(xs, NullTable::simulate(NullStatistic::JarqueBera, xs.size(), mc_reps, rng.next_u64()));
    case PValueMethod::Exact:
      break;
  }
  throw std::invalid_argument("Jarque-Bera has no exact p-value");
}

NormalityReport jarque_bera(std::span<const double> xs, const NullTable& null) {
  if (xs.size() < 8) throw DegenerateSampleError("Jarque-Bera needs at least 8 values");
  check_table(null, NullStatistic::JarqueBera, xs.size());
  const double jb = jarque_bera_statistic(xs);
  return {jb, null.upper_pvalue(jb), NormalityMethod::JarqueBera, xs.size(), PValueMethod::MonteCarlo};
}

NormalityReport lilliefors(std::span<const double> xs, std::size_t mc_reps, Stream& rng) {
  if (xs.size() < 5) throw DegenerateSampleError("Lilliefors needs at least 5 values");
  return lilliefors(xs, NullTable::simulate(NullStatistic::Lilliefors, xs.size(), mc_reps, rng.next_u64()));
}

NormalityReport lilliefors(std::span<const double> xs, const NullTable& null) {
  check_table(null, NullStatistic::Lilliefors, xs.size());
  const double d = lilliefors_statistic(xs);
  return {d, null.upper_pvalue(d), NormalityMethod::Lilliefors, xs.size(), PValueMethod::MonteCarlo};
}

double SimulationSummary::rmse() const { return std::sqrt(mse); }

SimulationSummary mse_bias_summary(std::span<const double> estimates, double theta0) {
  const std::size_t m = estimates.size();
  if (m < 10) throw DegenerateSampleError("MSE/bias summary needs at least 10 estimates");
  for (double e : estimates)
    if (!std::isfinite(e)) throw DomainError("MSE/bias summary: non-finite estimate");
  const double md = static_cast<double>(m);
  SimulationSummary s;
  s.m = m;
  s.theta0 = theta0;
  s.mean_est = std::accumulate(estimates.begin(), estimates.end(), 0.0) / md;
  double ss = 0.0;
  double se = 0.0;
  for (double e : estimates) {
    ss += (e - s.mean_est) * (e - s.mean_est);
    se += (e - theta0) * (e - theta0);
  }
  s.S2 = ss / (md - 1.0);
  s.mse = se / md;
  s.bias = s.mean_est - theta0;
  const double spread = s.mse - s.bias * s.bias;
  if (!(spread > 0.0)) throw DegenerateSampleError("MSE/bias summary: MSE - B^2 is not positive");
  s.t = std::sqrt(md - 1.0) * s.bias / std::sqrt(spread);
  s.z_pvalue = two_sided_normal_pvalue(s.t);
  return s;
}

NormalityReport mse_bias_report(const SimulationSummary& summary) {
  return {std::abs(summary.t), summary.z_pvalue, NormalityMethod::MseBiasT, summary.m,
          PValueMethod::Asymptotic};
}

PublishedZ z_from_published(double bias, double rmse, std::size_t m, std::optional<std::size_t> m_target) {
  if (!(rmse > std::abs(bias))) throw DomainError("published RMSE must exceed |bias|");
  if (m < 2) throw DomainError("published replicate count must be at least 2");
  if (m_target && *m_target < 2) throw DomainError("target replicate count must be at least 2");
  const double ratio = bias / std::sqrt(rmse * rmse - bias * bias);
  PublishedZ out;
  out.z = std::sqrt(static_cast<double>(m - 1)) * ratio;
  if (m_target) out.z_star = std::sqrt(static_cast<double>(*m_target - 1)) * ratio;
  return out;
}

double t_star(std::span<const double> ts) {
  const std::size_t m = ts.size();
  if (m < 10) throw DegenerateSampleError("t* needs at least 10 statistics");
  const double md = static_cast<double>(m);
  const double mean = std::accumulate(ts.begin(), ts.end(), 0.0) / md;
  double ss = 0.0;
  for (double t : ts) ss += (t - mean) * (t - mean);
  const double var = ss / md;
  if (!(var > 0.0)) throw DegenerateSampleError("t*: zero variance");
  return std::sqrt(md - 1.0) * mean / std::sqrt(var);
}

double hermite(int order, double z) {
  // He_{r+1} = z He_r - r He_{r-1}
  if (order < 0) throw std::invalid_argument("Hermite order must be nonnegative");
  double prev = 1.0;
  if (order == 0) return prev;
  double cur = z;
  for (int r = 1; r < order; ++r) {
    const double next = z * cur - r * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

EdgeworthValue edgeworth_density(double z, const EdgeworthSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("Edgeworth expansion needs n >= 1");
  const double n = static_cast<double>(spec.n);
  const double correction = 1.0 + spec.rho3 * hermite(3, z) / (6.0 * std::sqrt(n)) +
                            (3.0 * spec.rho4 * hermite(4, z) + spec.rho3 * spec.rho3 * hermite(6, z)) / (72.0 * n);
  const double f = normal_pdf(z) * correction;
  return {f, f < 0.0};
}

}  // namespace tailnorm
