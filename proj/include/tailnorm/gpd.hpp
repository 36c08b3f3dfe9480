#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tailnorm/rng.hpp"

namespace tailnorm {

/// Generalized Pareto parameters: F(x) = 1 - (1 + (xi/sigma)(x - mu))^(-1/xi).
///
/// Estimation outputs may carry xi <= 0 and are stored unclamped; evaluation and
/// sampling require xi > 0 and sigma > 0.
struct GpdParams {
  double xi = 0.5;
  double sigma = 1.0;
  double mu = 0.0;

  /// alpha = 1/xi; moments of order below alpha are finite. Throws DomainError on xi == 0.
  double tail_index() const;

  /// Throws DomainError unless xi > 0 and sigma > 0.
  void validate() const;
};

/// Order statistics of a sample. Values are kept sorted ascending.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> values);

  std::span<const double> sorted() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  double mean() const;

  /// 1-based order statistic x_(i).
  double order_stat(std::size_t i) const { return values_.at(i - 1); }

  Sample scaled(double factor) const;

 private:
  std::vector<double> values_;
};

double gpd_cdf(double x, const GpdParams& p);

/// Analytic inverse of gpd_cdf. prob must lie in [0, 1).
double gpd_quantile(double prob, const GpdParams& p);

/// n inverse-transform draws, one uniform per draw.
Sample sample_gpd(std::size_t n, const GpdParams& p, Stream& rng);

struct ShiftedSample {
  Sample sample;
  double location = 0.0;
};

/// Subtracts the sample minimum, turning a three-parameter sample into a
/// two-parameter one. The returned location is the subtracted value.
ShiftedSample shift_to_two_param(const Sample& s);

}  // namespace tailnorm
