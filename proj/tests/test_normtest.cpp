#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <catch_amalgamated.hpp>

#include "tailnorm/error.hpp"
#include "tailnorm/normtest.hpp"

using namespace tailnorm;
using Catch::Approx;

namespace {

std::vector<double> normals(std::size_t n, Stream& rng, double mean = 0.0, double sd = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = mean + sd * rng.normal();
  return v;
}

// Composite trapezoid rule.
template <class F>
double trapezoid(F f, double a, double b, double h) {
  const auto steps = static_cast<std::size_t>(std::llround((b - a) / h));
  double acc = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < steps; ++i) acc += f(a + h * static_cast<double>(i));
  return acc * h;
}

}  // namespace

TEST_CASE("moment_stats by hand", "[normtest][moments]") {
  const std::vector<double> two_point{-1.0, 1.0, -1.0, 1.0};
  const Moments m = moment_stats(two_point);
  CHECK(m.mean == 0.0);
  CHECK(m.variance == 1.0);
  CHECK(m.skewness == 0.0);
  CHECK(m.kurtosis == 1.0);
  CHECK_THROWS_AS(moment_stats(std::vector<double>{2.0, 2.0, 2.0, 2.0}), DegenerateSampleError);
  CHECK_THROWS_AS(moment_stats(std::vector<double>{1.0, 2.0, 3.0}), DegenerateSampleError);
}

TEST_CASE("normality statistics are affine invariant", "[normtest][property]") {
  Stream rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(40);
    for (double& x : xs) x = std::exp(rng.normal());
    const double a = 10.0 * rng.uniform() - 5.0;
    const double b = 0.1 + 100.0 * rng.uniform();
    std::vector<double> ys(xs);
    for (double& y : ys) y = a + b * y;
    const Moments mx = moment_stats(xs), my = moment_stats(ys);
    CHECK(my.skewness == Approx(mx.skewness).margin(1e-10));
    CHECK(my.kurtosis == Approx(mx.kurtosis).margin(1e-10));
    CHECK(jarque_bera_statistic(ys) == Approx(jarque_bera_statistic(xs)).margin(1e-10));
    CHECK(lilliefors_statistic(ys) == Approx(lilliefors_statistic(xs)).margin(1e-12));
  }
}

TEST_CASE("normal draws have normal moments", "[normtest][moments]") {
  Stream rng(2718);
  const Moments m = moment_stats(normals(1'000'000, rng));
  CHECK(m.skewness == Approx(0.0).margin(0.01));
  CHECK(m.kurtosis == Approx(3.0).margin(0.02));
}

TEST_CASE("Jarque-Bera statistic and asymptotic p-value", "[normtest][jb]") {
  CHECK(jarque_bera_statistic(500, 0.0, 3.0) == 0.0);
  // Moments of the ML column at n = 250, xi = 0.75: (1000/6)(0.0124^2 + 0.4413^2/4)
  const double jb = jarque_bera_statistic(1000, 0.0124, 3.4413);
  CHECK(jb == Approx(8.14003041666667).epsilon(1e-12));
  CHECK(std::exp(-0.5 * jb) == Approx(0.0170771287908428).epsilon(1e-10));

  Stream rng(1);
  const auto xs = normals(200, rng);
  const auto rep = jarque_bera(xs, PValueMethod::Asymptotic, 0, rng);
  CHECK(rep.pvalue == Approx(std::exp(-0.5 * rep.statistic)));
  CHECK(rep.method == NormalityMethod::JarqueBera);
  CHECK(rep.pvalue_method == PValueMethod::Asymptotic);
  CHECK_THROWS_AS(jarque_bera(std::vector<double>(7, 1.0), PValueMethod::Asymptotic, 0, rng), DegenerateSampleError);
  CHECK_THROWS_AS(jarque_bera(xs, PValueMethod::Exact, 0, rng), std::invalid_argument);
}

TEST_CASE("Monte Carlo p-values are calibrated under the null", "[normtest][calibration]") {
  constexpr std::size_t kN = 50;
  constexpr int kTrials = 2000;
  const NullTable jb_null = NullTable::simulate(NullStatistic::JarqueBera, kN, 10'000, 0xA11CE);
  const NullTable lf_null = NullTable::simulate(NullStatistic::Lilliefors, kN, 10'000, 0xB0B);
  Stream rng(8080);
  int jb_reject = 0, lf_reject = 0;
  for (int t = 0; t < kTrials; ++t) {
    const auto xs = normals(kN, rng, 3.0, 2.0);
    jb_reject += jarque_bera(xs, jb_null).pvalue < 0.05;
    lf_reject += lilliefors(xs, lf_null).pvalue < 0.05;
  }
  CHECK(jb_reject / double(kTrials) == Approx(0.05).margin(0.015));
  CHECK(lf_reject / double(kTrials) == Approx(0.05).margin(0.015));
}

TEST_CASE("Monte Carlo p-value convention", "[normtest]") {
  const NullTable t(NullStatistic::JarqueBera, 10, {1.0, 2.0, 3.0, 4.0});
  CHECK(t.upper_pvalue(10.0) == Approx(1.0 / 5.0));
  CHECK(t.upper_pvalue(3.0) == Approx(3.0 / 5.0));
  CHECK(t.upper_pvalue(0.0) == Approx(1.0));
  Stream rng(3);
  const auto xs = normals(12, rng);
  CHECK_THROWS_AS(jarque_bera(xs, t), std::invalid_argument);
  const auto rep = jarque_bera(xs, PValueMethod::MonteCarlo, 500, rng);
  CHECK(rep.pvalue >= 1.0 / 501.0);
  CHECK(rep.pvalue <= 1.0);
}

TEST_CASE("Lilliefors on exact normal quantiles", "[normtest][lilliefors]") {
  std::vector<double> xs(100);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = normal_quantile((static_cast<double>(i) + 0.5) / 100.0);
  Stream rng(5);
  const auto rep = lilliefors(xs, 10'000, rng);
  CHECK(rep.statistic < 0.03);
  CHECK(rep.pvalue > 0.9);
  CHECK_THROWS_AS(lilliefors(std::vector<double>{1.0, 2.0, 3.0, 4.0}, 100, rng), DegenerateSampleError);
}

TEST_CASE("MSE/bias summary", "[normtest][summary]") {
  SECTION("zero bias") {
    std::vector<double> est;
    for (int i = 0; i < 20; ++i) est.push_back(0.5 + (i % 2 ? 0.1 : -0.1));
    const auto s = mse_bias_summary(est, 0.5);
    CHECK(s.bias == Approx(0.0).margin(1e-15));
    CHECK(s.t == Approx(0.0).margin(1e-12));
    CHECK(s.z_pvalue == Approx(1.0).margin(1e-12));
  }
  SECTION("reconstructed batch matches the published-numbers path") {
    // theta0 + B +/- d with d^2 = RMSE^2 - B^2 reproduces bias 0.16 and RMSE 0.46 exactly.
    const double b = 0.16, rmse = 0.46, d = std::sqrt(rmse * rmse - b * b);
    std::vector<double> est(50'000);
    for (std::size_t i = 0; i < est.size(); ++i) est[i] = 0.4 + b + (i % 2 ? d : -d);
    const auto s = mse_bias_summary(est, 0.4);
    CHECK(s.rmse() == Approx(rmse).epsilon(1e-12));
    const auto pub = z_from_published(s.bias, s.rmse(), s.m);
    CHECK(s.t == Approx(pub.z).epsilon(1e-10));
    CHECK(s.t == Approx(82.9561).margin(0.005));
  }
  SECTION("degenerate batch") {
    CHECK_THROWS_AS(mse_bias_summary(std::vector<double>(20, 0.3), 0.3), DegenerateSampleError);
    CHECK_THROWS_AS(mse_bias_summary(std::vector<double>(5, 0.3), 0.3), DegenerateSampleError);
  }
}

TEST_CASE("MSE/bias identity and path equivalence", "[normtest][property]") {
  Stream rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 10 + rng.index(3000);
    std::vector<double> est(m);
    const double shift = 2.0 * rng.uniform() - 1.0;
    for (double& e : est) e = shift + std::exp(0.5 * rng.normal());
    const double theta0 = rng.uniform();
    const auto s = mse_bias_summary(est, theta0);
    const double md = static_cast<double>(m);
    CHECK(std::abs(md * s.mse - (md - 1.0) * s.S2 - md * s.bias * s.bias) <= 1e-9 * md * s.mse);
    CHECK(s.mse >= s.bias * s.bias);
    CHECK(s.t == Approx(z_from_published(s.bias, s.rmse(), m).z).epsilon(1e-10));
  }
}

TEST_CASE("t-test on exactly normal estimates has nominal size", "[normtest][calibration]") {
  Stream rng(4242);
  int rejected = 0;
  constexpr int kTrials = 2000;
  for (int t = 0; t < kTrials; ++t) {
    const auto est = normals(2000, rng, 0.3, 0.05);
    rejected += mse_bias_summary(est, 0.3).z_pvalue < 0.05;
  }
  CHECK(rejected / double(kTrials) == Approx(0.05).margin(0.015));
}

TEST_CASE("t-test power grows with skewness", "[normtest][power]") {
  // Log-normal estimates with median theta0 = 1; m = 30 keeps the rates away from 0 and 1.
  Stream rng(777);
  std::vector<double> rates;
  constexpr int kTrials = 2000;
  for (double spread : {0.5, 1.0, 2.0}) {
    int rejected = 0;
    for (int t = 0; t < kTrials; ++t) {
      std::vector<double> est(30);
      for (double& e : est) e = std::exp(spread * rng.normal());
      rejected += mse_bias_summary(est, 1.0).z_pvalue < 0.05;
    }
    rates.push_back(rejected / double(kTrials));
  }
  CHECK(rates[0] < rates[1]);
  CHECK(rates[1] < rates[2]);
}

TEST_CASE("z from published bias and RMSE", "[normtest][published]") {
  // Tolerance 0.05: the printed bias/RMSE are rounded to two decimals.
  const auto ml = z_from_published(0.16, 0.46, 50'000, 1000);
  CHECK(ml.z == Approx(82.9561).margin(0.05));
  REQUIRE(ml.z_star);
  CHECK(*ml.z_star == Approx(11.7318).margin(0.05));
  CHECK(z_from_published(0.3, 0.38, 50'000).z == Approx(287.6118).margin(0.05));
  CHECK_FALSE(z_from_published(0.3, 0.38, 50'000).z_star);
  CHECK(z_from_published(0.0, 0.2, 1000, 1000).z == 0.0);
  CHECK_THROWS_AS(z_from_published(0.13, 0.13, 50'000), DomainError);
  CHECK_THROWS_AS(z_from_published(0.1, 0.2, 1), DomainError);
}

TEST_CASE("t* statistic", "[normtest][tstar]") {
  std::vector<double> sym{0.0, 0.0, 1.5, -1.5, 2.0, -2.0, 0.3, -0.3, 0.0, 0.7, -0.7};
  CHECK(t_star(sym) == Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(t_star(std::vector<double>(12, 0.0)), DegenerateSampleError);

  Stream rng(31337);
  int inside = 0;
  for (int trial = 0; trial < 200; ++trial) inside += std::abs(t_star(normals(10'000, rng))) < 4.0;
  CHECK(inside == 200);

  const double shifted = t_star(normals(10'000, rng, 0.1, 1.0));
  CHECK(shifted == Approx(std::sqrt(9999.0) * 0.1).margin(4.0));
  CHECK(shifted > 5.0);
}

TEST_CASE("Hermite polynomials", "[normtest][edgeworth]") {
  for (double z : {-2.5, -1.0, 0.0, 0.3, 1.7}) {
    CHECK(hermite(3, z) == Approx(z * z * z - 3 * z).margin(1e-12));
    CHECK(hermite(4, z) == Approx(std::pow(z, 4) - 6 * z * z + 3).margin(1e-12));
    CHECK(hermite(6, z) == Approx(std::pow(z, 6) - 15 * std::pow(z, 4) + 45 * z * z - 15).margin(1e-10));
  }
}

TEST_CASE("Edgeworth density", "[normtest][edgeworth]") {
  for (double z : {-4.0, -1.0, 0.0, 0.5, 3.0}) CHECK(edgeworth_density(z, {0.0, 0.0, 17}).density == normal_pdf(z));

  const EdgeworthSpec spec{0.4, 1.2, 30};
  CHECK(edgeworth_density(0.0, spec).density ==
        Approx(normal_pdf(0.0) * (1.0 + (9.0 * 1.2 - 15.0 * 0.16) / (72.0 * 30))).epsilon(1e-14));

  Stream rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    const EdgeworthSpec s{4.0 * rng.uniform() - 2.0, 10.0 * rng.uniform() - 1.0, 1 + rng.index(500)};
    const double integral = trapezoid([&](double z) { return edgeworth_density(z, s).density; }, -10.0, 10.0, 1e-3);
    CHECK(integral == Approx(1.0).margin(1e-6));
  }

  const auto wild = edgeworth_density(-2.5, {3.0, 0.0, 1});
  CHECK(wild.negative);
  CHECK(wild.density < 0.0);
}
