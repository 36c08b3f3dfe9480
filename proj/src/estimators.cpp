#include "tailnorm/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tailnorm/error.hpp"
#include "tailnorm/kernels.hpp"

namespace tailnorm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_nonnegative_spread(const Sample& s, std::size_t min_n, const char* who) {
  if (s.size() < min_n) {
    throw DegenerateSampleError(std::string(who) + ": need at least " + std::to_string(min_n) +
                                " observations, got " + std::to_string(s.size()));
  }
  if (s.min() < 0.0) throw DomainError(std::string(who) + ": sample must be nonnegative");
  if (!(s.max() > s.min())) throw DegenerateSampleError(std::string(who) + ": all values equal");
}

// xi = -k(b), sigma = k(b)/b, with the exponential limit sigma = mean at b = 0.
EstimateRecord record_from_b(double b, std::span<const double> xs, double scale, Method method) {
  EstimateRecord r;
  r.method = method;
  const double k = profile_k(b, xs);
  r.xi_hat = -k;
  if (b == 0.0) {
    r.sigma_hat = scale * std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  } else {
    r.sigma_hat = scale * k / b;
  }
  r.converged = std::isfinite(r.xi_hat) && std::isfinite(r.sigma_hat) && r.sigma_hat > 0.0;
  return r;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::PWM:
      return "PWM";
    case Method::ML:
      return "ML";
    case Method::ZS:
      return "ZS";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "pwm") return Method::PWM;
  if (lower == "ml" || lower == "mle") return Method::ML;
  if (lower == "zs") return Method::ZS;
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "' (expected pwm, ml or zs)");
}

std::vector<double> EstimateBatch::converged_xi() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records)
    if (r.converged) out.push_back(r.xi_hat);
  return out;
}

std::size_t EstimateBatch::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const EstimateRecord& r) { return !r.converged; }));
}

EstimateRecord estimate_pwm(const Sample& s) {
  if (s.size() < 3) throw DegenerateSampleError("PWM: need at least 3 observations");
  if (!(s.max() > s.min())) throw DegenerateSampleError("PWM: all values equal");
  const auto xs = s.sorted();
  const double n = static_cast<double>(xs.size());
  double a0 = 0.0;
  double a1 = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double p = (static_cast<double>(j + 1) - 0.35) / n;
    a0 += xs[j];
    a1 += xs[j] * (1.0 - p);
  }
  a0 /= n;
  a1 /= n;
  const double denom = a0 - 2.0 * a1;
  if (!(std::abs(denom) > 1e-12 * std::max(std::abs(a0), 1e-300))) {
    throw DegenerateSampleError("PWM: a0 - 2 a1 vanishes");
  }
  EstimateRecord r;
  r.method = Method::PWM;
  r.xi_hat = 2.0 - a0 / denom;
  r.sigma_hat = 2.0 * a0 * a1 / denom;
  r.converged = std::isfinite(r.xi_hat) && std::isfinite(r.sigma_hat) && r.sigma_hat > 0.0;
  return r;
}

double profile_k(double b, std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) {
    const double bx = b * x;
    if (!(bx < 1.0)) throw DomainError("profile likelihood needs b < 1/max(x)");
    acc += std::log1p(-bx);
  }
  return -acc / static_cast<double>(xs.size());
}

double profile_loglik(double b, std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  if (b == 0.0) {
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    return n * (-std::log(mean) - 1.0);
  }
  const double k = profile_k(b, xs);
  const double ratio = b / k;
  if (!(ratio > 0.0)) throw DomainError("profile likelihood: k(b) and b disagree in sign");
  return n * (std::log(ratio) + k - 1.0);
}

double ml_upper_bound(std::span<const double> unit_max_xs) {
  constexpr double kEdge = 1.0 - 1e-12;
  if (profile_k(kEdge, unit_max_xs) <= 1.0) return kEdge;
  // k(b) increases in b; bisect for k(b) = 1 (xi = -1).
  double lo = 0.0;
  double hi = kEdge;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (profile_k(mid, unit_max_xs) <= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

namespace {

// d/db of the profile log-likelihood, divided by n. Loses precision as b -> 0.
double profile_score(double b, std::span<const double> xs) {
  double k = 0.0;
  double dk = 0.0;
  for (double x : xs) {
    k -= std::log1p(-b * x);
    dk += x / (1.0 - b * x);
  }
  const double n = static_cast<double>(xs.size());
  k /= n;
  dk /= n;
  return 1.0 / b + dk * (1.0 - 1.0 / k);
}

// The argmax of a smooth function is only located to about sqrt(eps) by
// comparing values; bisecting on the sign of the score pins it to rounding.
double polish_stationary_point(double b_hat, double a, double c, double b_hi, std::span<const double> xs) {
  const double pad = 1e-6 * std::max(1.0, std::abs(b_hat));
  double lo = a - pad;
  double hi = std::min(c + pad, b_hi);
  if (!(lo < b_hat && b_hat < hi)) return b_hat;
  if (lo * hi <= 0.0 || std::min(std::abs(lo), std::abs(hi)) < 1e-6) return b_hat;
  if (!(profile_score(lo, xs) > 0.0 && profile_score(hi, xs) < 0.0)) return b_hat;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (profile_score(mid, xs) > 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  return profile_loglik(root, xs) >= profile_loglik(b_hat, xs) - 1e-9 * std::abs(profile_loglik(b_hat, xs)) ? root : b_hat;
}

}  // namespace

EstimateRecord estimate_ml(const Sample& s) {
  require_nonnegative_spread(s, 3, "ML");
  const double scale = s.max();
  std::vector<double> y(s.sorted().begin(), s.sorted().end());
  for (double& v : y) v /= scale;
  const std::span<const double> ys(y);
  const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

  const double b_hi = ml_upper_bound(ys);
  double b_lo = -20.0 / ybar;
  constexpr std::size_t kGrid = 200;
  std::vector<double> grid(kGrid);
  std::vector<double> ll(kGrid);
  std::size_t best = 0;
  for (int widen = 0;; ++widen) {
    for (std::size_t i = 0; i < kGrid; ++i) {
      grid[i] = i + 1 == kGrid ? b_hi : b_lo + (b_hi - b_lo) * static_cast<double>(i) / static_cast<double>(kGrid - 1);
      ll[i] = profile_loglik(grid[i], ys);
    }
    best = static_cast<std::size_t>(std::max_element(ll.begin(), ll.end()) - ll.begin());
    if (best != 0) break;
    if (widen == 3) throw ConvergenceError("ML: likelihood still increasing at the lower search edge");
    b_lo *= 10.0;
  }

  // Golden-section maximization on the bracket around the best grid point.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = grid[best - 1];
  double c = grid[std::min(best + 1, kGrid - 1)];
  double x1 = c - kInvPhi * (c - a);
  double x2 = a + kInvPhi * (c - a);
  double f1 = profile_loglik(x1, ys);
  double f2 = profile_loglik(x2, ys);
  int iterations = 0;
  while (c - a > 1e-10) {
    if (++iterations > 200) throw ConvergenceError("ML: golden-section refinement did not converge");
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (c - a);
      f2 = profile_loglik(x2, ys);
    } else {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - kInvPhi * (c - a);
      f1 = profile_loglik(x1, ys);
    }
  }
  double b_hat = f1 >= f2 ? x1 : x2;
  if (std::max(f1, f2) < ll[best]) b_hat = grid[best];
  b_hat = polish_stationary_point(b_hat, a, c, b_hi, ys);

  EstimateRecord r = record_from_b(b_hat, ys, scale, Method::ML);
  if (!r.converged) throw ConvergenceError("ML: fitted scale is not positive");
  return r;
}

std::size_t zs_grid_size(std::size_t n) {
  return 20 + static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
}

ZsGrid zs_grid(const Sample& s) {
  require_nonnegative_spread(s, 5, "ZS");
  const std::size_t n = s.size();
  const double xmax = s.max();
  // First-quartile order statistic x_(floor(n/4 + 0.5)), 1-based.
  const auto q = static_cast<std::size_t>(std::floor(static_cast<double>(n) / 4.0 + 0.5));
  const double xstar = s.order_stat(std::max<std::size_t>(q, 1));
  if (!(xstar > 0.0)) throw DegenerateSampleError("ZS: first-quartile order statistic is zero");

  const std::size_t mg = zs_grid_size(n);
  ZsGrid g;
  g.b.resize(mg);
  g.loglik.resize(mg);
  g.weights.resize(mg);
  for (std::size_t j = 0; j < mg; ++j) {
    const double jj = static_cast<double>(j + 1) - 0.5;
    g.b[j] = 1.0 / xmax + (1.0 - std::sqrt(static_cast<double>(mg) / jj)) / (3.0 * xstar);
    g.loglik[j] = profile_loglik(g.b[j], s.sorted());
  }
  const double top = *std::max_element(g.loglik.begin(), g.loglik.end());
  double total = 0.0;
  for (std::size_t j = 0; j < mg; ++j) {
    g.weights[j] = std::exp(g.loglik[j] - top);
    total += g.weights[j];
  }
  for (std::size_t j = 0; j < mg; ++j) {
    g.weights[j] /= total;
    g.b_hat += g.weights[j] * g.b[j];
  }
  return g;
}

EstimateRecord estimate_zs(const Sample& s) {
  const ZsGrid g = zs_grid(s);
  EstimateRecord r = record_from_b(g.b_hat, s.sorted(), 1.0, Method::ZS);
  if (!r.converged) throw DegenerateSampleError("ZS: fitted scale is not positive");
  return r;
}

EstimateRecord estimate(Method method, const Sample& s) {
  EstimateRecord r;
  switch (method) {
    case Method::PWM:
      r = estimate_pwm(s);
      break;
    case Method::ML:
      r = estimate_ml(s);
      break;
    case Method::ZS:
      r = estimate_zs(s);
      break;
  }
  if (!r.converged) throw ConvergenceError(std::string(to_string(method)) + ": estimate not usable");
  return r;
}

EstimateRecord estimate_flagged(Method method, const Sample& s) noexcept {
  try {
    return estimate(method, s);
  } catch (...) {
    return {kNaN, kNaN, method, false};
  }
}

double bootstrap_sd(const Sample& s, Method method, std::size_t reps, Stream& rng, const ExecPolicy& exec) {
  return bootstrap_sd(
      s, [method](const Sample& r) { return estimate_flagged(method, r); }, reps, rng, exec);
}

double bootstrap_sd(const Sample& s, const ShapeEstimator& estimator, std::size_t reps, Stream& rng,
                    const ExecPolicy& exec) {
  if (s.size() < 5) throw DegenerateSampleError("bootstrap: need at least 5 observations");
  if (!(s.max() > s.min())) throw DegenerateSampleError("bootstrap: all values equal");
  if (reps < 50) throw std::invalid_argument("bootstrap: need at least 50 replicates");
  const std::uint64_t key = rng.next_u64();
  const auto records = kernels::bootstrap_estimates(s, estimator, reps, key, exec);

  std::vector<double> xi;
  xi.reserve(records.size());
  for (const auto& r : records)
    if (r.converged && std::isfinite(r.xi_hat)) xi.push_back(r.xi_hat);
  const std::size_t failed = reps - xi.size();
  if (failed * 10 > reps) {
    throw ConvergenceError("bootstrap: " + std::to_string(failed) + " of " + std::to_string(reps) +
                           " replicates failed");
  }
  if (xi.size() < 2) throw ConvergenceError("bootstrap: fewer than two usable replicates");
  // Deviations from the first replicate keep identical estimates at exactly zero spread.
  const double origin = xi.front();
  double shift = 0.0;
  for (double v : xi) shift += v - origin;
  shift /= static_cast<double>(xi.size());
  double ss = 0.0;
  for (double v : xi) ss += (v - origin - shift) * (v - origin - shift);
  return std::sqrt(ss / static_cast<double>(xi.size() - 1));
}

}  // namespace tailnorm
