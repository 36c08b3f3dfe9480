// OpenMP kernels against their serial reference loops: results must be bitwise equal
// for any thread count.

#include <cstring>
#include <vector>

#include <catch_amalgamated.hpp>

#include "tailnorm/kernels.hpp"

using namespace tailnorm;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

bool same(const std::vector<EstimateRecord>& a, const std::vector<EstimateRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i].xi_hat, b[i].xi_hat) || !same_bits(a[i].sigma_hat, b[i].sigma_hat) ||
        a[i].converged != b[i].converged || a[i].method != b[i].method)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bootstrap kernel matches the serial reference", "[kernels]") {
  Stream rng(1);
  const Sample s = sample_gpd(60, {0.3, 1.0, 0.0}, rng);
  const ShapeEstimator est = [](const Sample& x) { return estimate_flagged(Method::ZS, x); };
  const auto ref = reference::bootstrap_estimates(s, est, 257, 99);
  for (int threads : {1, 2, 3, 8}) CHECK(same(kernels::bootstrap_estimates(s, est, 257, 99, {true, threads}), ref));
  CHECK(same(kernels::bootstrap_estimates(s, est, 257, 99, ExecPolicy::serial()), ref));
}

TEST_CASE("null-statistic kernel matches the serial reference", "[kernels]") {
  for (NullStatistic kind : {NullStatistic::JarqueBera, NullStatistic::Lilliefors}) {
    const auto ref = reference::null_statistics(kind, 40, 500, 7);
    for (int threads : {2, 5}) {
      const auto par = kernels::null_statistics(kind, 40, 500, 7, {true, threads});
      REQUIRE(par.size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i) CHECK(same_bits(par[i], ref[i]));
    }
  }
}

TEST_CASE("replicate kernel matches the serial reference", "[kernels]") {
  const std::vector<Method> methods{Method::PWM, Method::ZS, Method::ML};
  const GpdParams truth{0.5, 1.0, 1.0};
  const auto ref = reference::replicate_estimates(default_replicate_estimate, methods, 50, truth, 120, 5, 17);
  for (int threads : {1, 4}) {
    CHECK(same(kernels::replicate_estimates(default_replicate_estimate, methods, 50, truth, 120, 5, 17, {true, threads}),
               ref));
  }
}

TEST_CASE("rejection kernel matches the serial reference", "[kernels]") {
  const GpdParams truth{0.4, 1.0, 1.0};
  const auto rep = zs_bootstrap_replicate(60);
  const auto ref = reference::rejection_draws(rep, 20, truth, 40, 3, 11);
  const auto par = kernels::rejection_draws(rep, 20, truth, 40, 3, 11, {true, 3});
  REQUIRE(par.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    REQUIRE(par[i].has_value() == ref[i].has_value());
    if (ref[i]) {
      CHECK(same_bits(par[i]->xi_hat, ref[i]->xi_hat));
      CHECK(same_bits(par[i]->sd, ref[i]->sd));
    }
  }
}
