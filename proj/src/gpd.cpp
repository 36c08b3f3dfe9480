#include "tailnorm/gpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tailnorm/error.hpp"

namespace tailnorm {

double GpdParams::tail_index() const {
  if (xi == 0.0) throw DomainError("tail index undefined for xi = 0");
  return 1.0 / xi;
}

void GpdParams::validate() const {
  if (!(sigma > 0.0)) throw DomainError("GPD scale must be positive, got " + std::to_string(sigma));
  if (!(xi > 0.0)) throw DomainError("GPD shape must be positive, got " + std::to_string(xi));
  if (!std::isfinite(mu)) throw DomainError("GPD location must be finite");
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
}

double Sample::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

Sample Sample::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return Sample(std::move(v));
}

double gpd_cdf(double x, const GpdParams& p) {
  p.validate();
  if (x < p.mu) throw DomainError("x below the GPD location");
  const double base = 1.0 + (p.xi / p.sigma) * (x - p.mu);
  if (!(base >= std::numeric_limits<double>::min())) throw DomainError("GPD cdf argument out of range");
  // 1 - base^(-1/xi), written to keep precision near both ends.
  return -std::expm1(-std::log(base) / p.xi);
}

double gpd_quantile(double prob, const GpdParams& p) {
  p.validate();
  if (!(prob >= 0.0 && prob < 1.0)) throw DomainError("GPD quantile needs prob in [0, 1)");
  return p.mu + (p.sigma / p.xi) * std::expm1(-p.xi * std::log1p(-prob));
}

Sample sample_gpd(std::size_t n, const GpdParams& p, Stream& rng) {
  p.validate();
  std::vector<double> xs(n);
  for (double& x : xs) {
    // 1 - U is again uniform, so the survival form needs no log1p.
    x = p.mu + (p.sigma / p.xi) * std::expm1(-p.xi * std::log(rng.uniform()));
  }
  return Sample(std::move(xs));
}

ShiftedSample shift_to_two_param(const Sample& s) {
  if (s.size() < 2) throw DegenerateSampleError("shift needs at least two observations");
  const double lo = s.min();
  std::vector<double> v(s.sorted().begin(), s.sorted().end());
  for (double& x : v) x -= lo;
  return {Sample(std::move(v)), lo};
}

}  // namespace tailnorm
