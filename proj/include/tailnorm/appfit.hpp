#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tailnorm/estimators.hpp"
#include "tailnorm/gpd.hpp"
#include "tailnorm/parallel.hpp"
#include "tailnorm/rng.hpp"

namespace tailnorm {

struct PriceSeries {
  std::vector<std::string> dates;  // ISO-8601, ascending
  std::vector<double> closes;
};

struct PriceColumns {
  std::string date = "Date";
  std::string close = "Close";
};

/// Reads a delimited price file with a header row. Rows are reordered by date;
/// duplicate dates, non-positive or non-numeric prices raise ParseError.
PriceSeries load_price_csv(const std::filesystem::path& path, const PriceColumns& columns = {});

struct ReturnSeries {
  std::vector<std::string> timestamps;  // date of the later price of each pair
  std::vector<double> returns;
};

ReturnSeries log_returns(const PriceSeries& prices);
std::vector<double> log_returns(std::span<const double> prices);

struct TopK {
  std::size_t k = 150;
};
struct Threshold {
  double u = 0.0;
};
using ExceedanceRule = std::variant<TopK, Threshold>;

struct Exceedances {
  Sample excesses;  // r - u for every r > u
  double threshold = 0.0;
};

inline constexpr std::size_t kMinExcesses = 10;

/// TopK sets u to the (k+1)-th largest return. Membership is strict (r > u).
/// Fewer than `min_count` excesses throws DegenerateSampleError.
Exceedances exceedances(std::span<const double> returns, const ExceedanceRule& rule,
                        std::size_t min_count = kMinExcesses);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// xi_hat -/+ z_{(1+confidence)/2} sd.
ConfidenceInterval normal_ci(double xi_hat, double sd, double confidence);

/// 1/hi, or +infinity when hi <= 0 (no finite bound on the index).
double index_lower_bound(const ConfidenceInterval& ci);

struct TailFit {
  double threshold = 0.0;
  std::size_t k = 0;
  std::vector<EstimateRecord> fits;  // PWM, ML, ZS
  Method method = Method::ZS;
  double xi_hat = 0.0;
  double sigma_hat = 0.0;
  std::size_t bootstrap_reps = 0;
  double bootstrap_sd = 0.0;
  double confidence = 0.95;
  ConfidenceInterval ci95;
  double index_lower_bound = 0.0;

  const EstimateRecord& fit(Method m) const;
};

/// Fits all three estimators for reporting; the bootstrap interval uses `method`.
TailFit fit_tail(const Sample& excesses, Method method, std::size_t bootstrap_reps, Stream& rng,
                 double confidence = 0.95, const ExecPolicy& exec = {});
TailFit fit_tail(const Exceedances& tail, Method method, std::size_t bootstrap_reps, Stream& rng,
                 double confidence = 0.95, const ExecPolicy& exec = {});

/// ((i - 0.5)/n, F(x_(i))) for i = 1..n.
std::vector<std::pair<double, double>> pp_plot_data(const Sample& s, const GpdParams& p);

}  // namespace tailnorm
