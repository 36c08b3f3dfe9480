#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <catch_amalgamated.hpp>

#include "tailnorm/error.hpp"
#include "tailnorm/estimators.hpp"
#include "tailnorm/gpd.hpp"

using namespace tailnorm;
using Catch::Approx;

namespace {

Sample two_param_sample(std::size_t n, double xi, double sigma, std::uint64_t seed) {
  Stream rng(seed);
  return sample_gpd(n, {xi, sigma, 0.0}, rng);
}

double mean_xi(Method method, std::size_t reps, std::size_t n, double xi, std::uint64_t seed) {
  double acc = 0.0;
  for (std::size_t r = 0; r < reps; ++r) acc += estimate(method, two_param_sample(n, xi, 1.0, seed + r)).xi_hat;
  return acc / static_cast<double>(reps);
}

}  // namespace

TEST_CASE("method names round-trip", "[estimators]") {
  for (Method m : {Method::PWM, Method::ML, Method::ZS}) CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_method("zs") == Method::ZS);
  CHECK_THROWS_AS(parse_method("mom"), std::invalid_argument);
}

TEST_CASE("PWM hand-computed sample", "[estimators][pwm]") {
  // a0 = 7/3, a1 = 43/60  =>  xi = 2 - (7/3)/(9/10) = -16/27, sigma = 301/81
  const auto r = estimate_pwm(Sample({1.0, 2.0, 4.0}));
  CHECK(r.xi_hat == Approx(-16.0 / 27.0).epsilon(1e-13));
  CHECK(r.sigma_hat == Approx(301.0 / 81.0).epsilon(1e-13));
  CHECK(r.converged);
  CHECK(r.method == Method::PWM);
}

TEST_CASE("PWM degenerate samples", "[estimators][pwm]") {
  CHECK_THROWS_AS(estimate_pwm(Sample({2.0, 2.0, 2.0, 2.0})), DegenerateSampleError);
  CHECK_THROWS_AS(estimate_pwm(Sample({1.0, 2.0})), DegenerateSampleError);
}

TEST_CASE("PWM is consistent", "[estimators][pwm][slow]") {
  double acc = 0.0;
  constexpr int kReps = 1000;
  for (int r = 0; r < kReps; ++r) acc += estimate_pwm(two_param_sample(100'000, 0.5, 1.0, 1000 + r)).xi_hat;
  CHECK(acc / kReps == Approx(0.5).margin(0.01));
}

TEST_CASE("profile likelihood values", "[estimators][profile]") {
  const Sample s({1.0, 2.0, 4.0});
  // k(-1) = -(log 2 + log 3 + log 5)/3; l = 3 (log(b/k) + k - 1); 30-digit reference values.
  CHECK(profile_k(-1.0, s.sorted()) == Approx(-1.13373246055405179).epsilon(1e-14));
  CHECK(profile_loglik(-1.0, s.sorted()) == Approx(-6.77774313776245196).epsilon(1e-14));
  CHECK(profile_loglik(0.0, s.sorted()) == Approx(-5.54189358116161084).epsilon(1e-14));
  CHECK(std::abs(profile_loglik(1e-9, s.sorted()) - profile_loglik(0.0, s.sorted())) < 1e-5);
  CHECK(std::abs(profile_loglik(-1e-9, s.sorted()) - profile_loglik(0.0, s.sorted())) < 1e-5);
  CHECK_THROWS_AS(profile_loglik(0.25, s.sorted()), DomainError);
  CHECK_THROWS_AS(profile_loglik(0.3, s.sorted()), DomainError);
}

TEST_CASE("profile likelihood peaks near -xi/sigma", "[estimators][profile]") {
  const Sample s = two_param_sample(10'000, 0.5, 1.0, 77);
  double best_b = 0.0, best_l = -INFINITY;
  for (double b = -2.0; b < 0.0; b += 0.001) {
    const double l = profile_loglik(b, s.sorted());
    if (l > best_l) {
      best_l = l;
      best_b = b;
    }
  }
  CHECK(best_b == Approx(-0.5).margin(0.05));
}

TEST_CASE("ZS grid construction", "[estimators][zs]") {
  CHECK(zs_grid_size(25) == 25);
  CHECK(zs_grid_size(100) == 30);
  CHECK(zs_grid_size(99) == 29);

  Stream rng(3);
  for (int i = 0; i < 50; ++i) {
    const Sample s = sample_gpd(20 + 10 * i, {0.1 + 0.02 * i, 1.0, 0.0}, rng);
    const ZsGrid g = zs_grid(s);
    REQUIRE(g.b.size() == zs_grid_size(s.size()));
    CHECK(std::all_of(g.weights.begin(), g.weights.end(), [](double w) { return w >= 0.0; }));
    CHECK(std::accumulate(g.weights.begin(), g.weights.end(), 0.0) == Approx(1.0).margin(1e-12));
    CHECK(std::all_of(g.b.begin(), g.b.end(), [&](double b) { return b < 1.0 / s.max(); }));
  }
}

TEST_CASE("ZS rejects a zero first-quartile statistic", "[estimators][zs]") {
  CHECK_THROWS_AS(estimate_zs(Sample({0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0})), DegenerateSampleError);
  CHECK_THROWS_AS(estimate_zs(Sample({1.0, 2.0, 3.0})), DegenerateSampleError);
}

TEST_CASE("ML rejects degenerate input and flags in batch mode", "[estimators][ml]") {
  CHECK_THROWS_AS(estimate_ml(Sample({1.0, 1.0, 1.0, 1.0, 1.0})), DegenerateSampleError);
  const auto flagged = estimate_flagged(Method::ML, Sample({1.0, 1.0, 1.0, 1.0, 1.0}));
  CHECK_FALSE(flagged.converged);
  CHECK(flagged.method == Method::ML);
}

TEST_CASE("scale equivariance of all estimators", "[estimators][property]") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Sample s = two_param_sample(60 + 20 * seed, 0.1 * static_cast<double>(seed % 8 + 1), 1.0, seed);
    for (Method m : {Method::PWM, Method::ML, Method::ZS}) {
      const auto base = estimate(m, s);
      for (double c : {0.1, 10.0, 1000.0}) {
        const auto sc = estimate(m, s.scaled(c));
        CHECK(std::abs(sc.xi_hat - base.xi_hat) <= 1e-8);
        CHECK(std::abs(sc.sigma_hat - c * base.sigma_hat) <= 1e-8 * c);
      }
    }
  }
}

TEST_CASE("ML maximizes the profile likelihood over the ZS grid", "[estimators][property]") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const Sample s = two_param_sample(30 + seed % 7 * 40, 0.25 + 0.05 * (seed % 10), 2.0, seed);
    const auto ml = estimate_ml(s);
    const double b_ml = -ml.xi_hat / ml.sigma_hat;
    const double l_ml = profile_loglik(b_ml, s.sorted());
    const ZsGrid g = zs_grid(s);
    for (double b : g.b) {
      // Only points inside the ML search region (xi >= -1) compete.
      if (profile_k(b, s.sorted()) > 1.0) continue;
      CHECK(l_ml >= profile_loglik(b, s.sorted()) - 1e-9 * std::abs(l_ml));
    }
  }
}

TEST_CASE("sign coherence for heavy-tailed data", "[estimators][property]") {
  for (Method m : {Method::PWM, Method::ML, Method::ZS}) {
    int positive = 0;
    constexpr int kReps = 200;
    for (int r = 0; r < kReps; ++r) {
      const auto e = estimate_flagged(m, two_param_sample(200, 0.5, 1.0, 5000 + r));
      REQUIRE(e.converged);
      CHECK(e.sigma_hat > 0.0);
      positive += e.xi_hat > 0.0;
    }
    CHECK(positive > 0.95 * kReps);
  }
}

TEST_CASE("ML and ZS are consistent at large n", "[estimators][slow]") {
  // 40 replicates: the replicate mean has sd near 0.001 here, far inside the margin.
  CHECK(mean_xi(Method::ML, 40, 100'000, 0.5, 9000) == Approx(0.5).margin(0.01));
  CHECK(mean_xi(Method::ZS, 40, 100'000, 0.5, 9100) == Approx(0.5).margin(0.01));
}

TEST_CASE("bootstrap standard deviation", "[estimators][bootstrap]") {
  const Sample s = two_param_sample(150, 0.19, 0.0044, 314);
  Stream rng(1);
  const ShapeEstimator constant = [](const Sample&) { return EstimateRecord{0.3, 1.0, Method::ZS, true}; };
  CHECK(bootstrap_sd(s, constant, 100, rng) == 0.0);

  for (Method m : {Method::PWM, Method::ML, Method::ZS}) {
    Stream r(2);
    CHECK(bootstrap_sd(s, m, 200, r) > 0.0);
  }

  Stream r(3);
  const double sd = bootstrap_sd(s, Method::ZS, 1000, r);
  CHECK(sd > 0.05);
  CHECK(sd < 0.15);
}

TEST_CASE("bootstrap failure policy", "[estimators][bootstrap]") {
  const Sample s = two_param_sample(50, 0.3, 1.0, 8);
  Stream rng(4);
  // Fails on every resample containing the sample maximum (about 63% of them).
  const double top = s.max();
  const ShapeEstimator flaky = [top](const Sample& x) { return EstimateRecord{x.mean(), 1.0, Method::PWM, x.max() < top}; };
  CHECK_THROWS_AS(bootstrap_sd(s, flaky, 100, rng), ConvergenceError);
  CHECK_THROWS_AS(bootstrap_sd(s, Method::ZS, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_sd(Sample({1.0, 2.0, 3.0}), Method::ZS, 100, rng), DegenerateSampleError);
}

TEST_CASE("bootstrap is independent of the execution policy", "[estimators][bootstrap]") {
  const Sample s = two_param_sample(80, 0.4, 1.0, 21);
  Stream a(10), b(10);
  const double serial = bootstrap_sd(s, Method::ZS, 300, a, ExecPolicy::serial());
  const double parallel = bootstrap_sd(s, Method::ZS, 300, b, ExecPolicy{true, 4});
  CHECK(serial == parallel);
}
