// Wall-clock comparison of the OpenMP kernels against their serial references.
//
//   bench_kernels [threads]

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <string>

#include <fmt/format.h>

#include "tailnorm/kernels.hpp"
#include "tailnorm/parallel.hpp"

using namespace tailnorm;

namespace {

template <class F>
double best_of(int runs, F&& f) {
  double best = 1e300;
  for (int i = 0; i < runs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const std::string& name, double serial, double parallel) {
  fmt::print("{:<24} {:>10.4f} {:>10.4f} {:>8.2f}x\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const ExecPolicy exec{true, argc > 1 ? std::atoi(argv[1]) : 0};
  fmt::print("threads: {}\n", resolved_threads(exec));
  fmt::print("{:<24} {:>10} {:>10} {:>9}\n", "kernel", "serial s", "omp s", "speedup");

  Stream rng(1);
  const Sample s = sample_gpd(150, {0.2, 1.0, 0.0}, rng);
  const ShapeEstimator zs = [](const Sample& x) { return estimate_flagged(Method::ZS, x); };
  row("bootstrap_estimates", best_of(3, [&] { reference::bootstrap_estimates(s, zs, 2000, 7); }),
      best_of(3, [&] { kernels::bootstrap_estimates(s, zs, 2000, 7, exec); }));

  row("null_statistics", best_of(3, [&] { reference::null_statistics(NullStatistic::Lilliefors, 100, 20000, 7); }),
      best_of(3, [&] { kernels::null_statistics(NullStatistic::Lilliefors, 100, 20000, 7, exec); }));

  const std::vector<Method> methods{Method::PWM, Method::ZS, Method::ML};
  const GpdParams truth{0.5, 1.0, 1.0};
  row("replicate_estimates",
      best_of(3, [&] { reference::replicate_estimates(default_replicate_estimate, methods, 250, truth, 1000, 7, 1); }),
      best_of(3, [&] {
        kernels::replicate_estimates(default_replicate_estimate, methods, 250, truth, 1000, 7, 1, exec);
      }));

  const auto rep = zs_bootstrap_replicate(200);
  row("rejection_draws", best_of(1, [&] { reference::rejection_draws(rep, 50, truth, 200, 7, 2); }),
      best_of(1, [&] { kernels::rejection_draws(rep, 50, truth, 200, 7, 2, exec); }));
  return 0;
}
