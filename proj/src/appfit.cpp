#include "tailnorm/appfit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <functional>
#include <numeric>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>

#include "csv.hpp"
#include "tailnorm/error.hpp"
#include "tailnorm/normtest.hpp"

namespace tailnorm {

PriceSeries load_price_csv(const std::filesystem::path& path, const PriceColumns& columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open price file " + path.string());
  static const std::regex iso_date(R"(^\d{4}-\d{2}-\d{2}([T ][0-9:.+\-Z]*)?$)");

  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> date_col, close_col;
  bool have_header = false;
  std::vector<std::pair<std::string, double>> rows;
  std::vector<std::size_t> row_lines;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = csv::split(line);
    if (!have_header) {
      date_col = csv::column(cells, columns.date);
      close_col = csv::column(cells, columns.close);
      if (!date_col) throw ParseError("price header has no '" + columns.date + "' column", lineno);
      if (!close_col) throw ParseError("price header has no '" + columns.close + "' column", lineno);
      have_header = true;
      continue;
    }
    if (cells.size() <= std::max(*date_col, *close_col)) throw ParseError("price row is missing fields", lineno);
    const std::string& date = cells[*date_col];
    if (!std::regex_match(date, iso_date)) throw ParseError("date '" + date + "' is not ISO-8601", lineno);
    const auto price = csv::to_double(cells[*close_col]);
    if (!price || !std::isfinite(*price)) throw ParseError("price '" + cells[*close_col] + "' is not numeric", lineno);
    if (!(*price > 0.0)) throw ParseError("price must be positive", lineno);
    rows.emplace_back(date, *price);
    row_lines.push_back(lineno);
  }
  if (rows.empty()) throw std::runtime_error("price file " + path.string() + " has no data rows");

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a].first < rows[b].first; });
  PriceSeries out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& [date, price] = rows[order[i]];
    if (i > 0 && date == out.dates.back()) throw ParseError("duplicate date " + date, row_lines[order[i]]);
    out.dates.push_back(date);
    out.closes.push_back(price);
  }
  return out;
}

std::vector<double> log_returns(std::span<const double> prices) {
  if (prices.size() < 2) throw DegenerateSampleError("log returns need at least two prices");
  std::vector<double> r(prices.size() - 1);
  for (std::size_t t = 1; t < prices.size(); ++t) {
    if (!(prices[t] > 0.0) || !(prices[t - 1] > 0.0)) throw DomainError("log returns need positive prices");
    r[t - 1] = std::log(prices[t] / prices[t - 1]);
  }
  return r;
}

ReturnSeries log_returns(const PriceSeries& prices) {
  ReturnSeries out;
  out.returns = log_returns(std::span<const double>(prices.closes));
  out.timestamps.assign(prices.dates.begin() + 1, prices.dates.end());
  return out;
}

Exceedances exceedances(std::span<const double> returns, const ExceedanceRule& rule, std::size_t min_count) {
  double u = 0.0;
  if (const auto* top = std::get_if<TopK>(&rule)) {
    if (top->k < min_count) {
      throw DegenerateSampleError("top-k needs k >= " + std::to_string(min_count) + ", got " + std::to_string(top->k));
    }
    if (returns.size() <= top->k) throw DegenerateSampleError("top-k needs more than k returns");
    std::vector<double> desc(returns.begin(), returns.end());
    std::nth_element(desc.begin(), desc.begin() + static_cast<std::ptrdiff_t>(top->k), desc.end(), std::greater<>());
    u = desc[top->k];
  } else {
    u = std::get<Threshold>(rule).u;
  }
  std::vector<double> excess;
  for (double r : returns)
    if (r > u) excess.push_back(r - u);
  if (excess.size() < min_count) {
    throw DegenerateSampleError("only " + std::to_string(excess.size()) + " returns exceed the threshold (need " +
                                std::to_string(min_count) + ")");
  }
  return {Sample(std::move(excess)), u};
}

ConfidenceInterval normal_ci(double xi_hat, double sd, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0, 1)");
  if (!(sd >= 0.0)) throw DomainError("standard deviation must be nonnegative");
  const double half = normal_quantile(0.5 * (1.0 + confidence)) * sd;
  return {xi_hat - half, xi_hat + half};
}

double index_lower_bound(const ConfidenceInterval& ci) {
  return ci.hi > 0.0 ? 1.0 / ci.hi : std::numeric_limits<double>::infinity();
}

const EstimateRecord& TailFit::fit(Method m) const {
  for (const auto& f : fits)
    if (f.method == m) return f;
  throw std::out_of_range("no fit for method " + std::string(to_string(m)));
}

TailFit fit_tail(const Sample& excesses, Method method, std::size_t bootstrap_reps, Stream& rng, double confidence,
                 const ExecPolicy& exec) {
  TailFit tf;
  tf.k = excesses.size();
  tf.method = method;
  for (Method m : {Method::PWM, Method::ML, Method::ZS}) {
    tf.fits.push_back(m == method ? estimate(m, excesses) : estimate_flagged(m, excesses));
  }
  const EstimateRecord& chosen = tf.fit(method);
  tf.xi_hat = chosen.xi_hat;
  tf.sigma_hat = chosen.sigma_hat;
  tf.bootstrap_reps = bootstrap_reps;
  tf.bootstrap_sd = bootstrap_sd(excesses, method, bootstrap_reps, rng, exec);
  tf.confidence = confidence;
  tf.ci95 = normal_ci(tf.xi_hat, tf.bootstrap_sd, confidence);
  tf.index_lower_bound = index_lower_bound(tf.ci95);
  return tf;
}

TailFit fit_tail(const Exceedances& tail, Method method, std::size_t bootstrap_reps, Stream& rng, double confidence,
                 const ExecPolicy& exec) {
  TailFit tf = fit_tail(tail.excesses, method, bootstrap_reps, rng, confidence, exec);
  tf.threshold = tail.threshold;
  return tf;
}

std::vector<std::pair<double, double>> pp_plot_data(const Sample& s, const GpdParams& p) {
  const auto xs = s.sorted();
  const double n = static_cast<double>(xs.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.emplace_back((static_cast<double>(i) + 0.5) / n, gpd_cdf(xs[i], p));
  }
  return out;
}

}  // namespace tailnorm
