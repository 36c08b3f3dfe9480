#include "tailnorm/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace tailnorm {
namespace detail {

EstimateRecord bootstrap_one(const Sample& s, const ShapeEstimator& estimator, std::uint64_t key,
                             std::size_t rep) {
  Stream rng = Stream::derive(key, {rep});
  const auto xs = s.sorted();
  std::vector<double> draw(xs.size());
  for (double& v : draw) v = xs[rng.index(xs.size())];
  try {
    return estimator(Sample(std::move(draw)));
  } catch (...) {
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), Method::ZS, false};
  }
}

double null_one(NullStatistic kind, std::size_t n, std::uint64_t key, std::size_t rep) {
  Stream rng = Stream::derive(key, {rep});
  std::vector<double> xs(n);
  for (double& v : xs) v = rng.normal();
  return kind == NullStatistic::JarqueBera ? jarque_bera_statistic(xs) : lilliefors_statistic(xs);
}

void replicate_one(const ReplicateEstimator& estimator, const std::vector<Method>& methods, std::size_t n,
                   const GpdParams& truth, std::uint64_t master, std::uint64_t cell, std::size_t j,
                   EstimateRecord* out) {
  for (std::size_t i = 0; i < methods.size(); ++i) {
    // Same stream per method: every estimator sees the same simulated sample.
    Stream rng = Stream::derive(master, {cell, j});
    try {
      out[i] = estimator(methods[i], n, truth, rng);
    } catch (...) {
      out[i] = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), methods[i],
                false};
    }
  }
}

std::optional<ZDraw> rejection_one(const RejectionReplicate& replicate, std::size_t n, const GpdParams& truth,
                                   std::uint64_t master, std::uint64_t cell, std::size_t j) {
  Stream rng = Stream::derive(master, {cell, j});
  try {
    return replicate(n, truth, rng);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace detail

namespace kernels {

namespace {

template <class Body>
void parallel_for(std::size_t count, const ExecPolicy& exec, Body&& body) {
  const auto total = static_cast<std::ptrdiff_t>(count);
  const int threads = resolved_threads(exec);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (exec.parallel && threads > 1)
  for (std::ptrdiff_t i = 0; i < total; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace

std::vector<EstimateRecord> bootstrap_estimates(const Sample& s, const ShapeEstimator& estimator, std::size_t reps,
                                                std::uint64_t key, const ExecPolicy& exec) {
  std::vector<EstimateRecord> out(reps);
  parallel_for(reps, exec, [&](std::size_t r) { out[r] = detail::bootstrap_one(s, estimator, key, r); });
  return out;
}

std::vector<double> null_statistics(NullStatistic kind, std::size_t n, std::size_t reps, std::uint64_t key,
                                    const ExecPolicy& exec) {
  std::vector<double> out(reps);
  parallel_for(reps, exec, [&](std::size_t r) { out[r] = detail::null_one(kind, n, key, r); });
  return out;
}

std::vector<EstimateRecord> replicate_estimates(const ReplicateEstimator& estimator,
                                                const std::vector<Method>& methods, std::size_t n,
                                                const GpdParams& truth, std::size_t m, std::uint64_t master,
                                                std::uint64_t cell, const ExecPolicy& exec) {
  std::vector<EstimateRecord> out(m * methods.size());
  parallel_for(m, exec, [&](std::size_t j) {
    detail::replicate_one(estimator, methods, n, truth, master, cell, j, out.data() + j * methods.size());
  });
  return out;
}

std::vector<std::optional<ZDraw>> rejection_draws(const RejectionReplicate& replicate, std::size_t n,
                                                  const GpdParams& truth, std::size_t m, std::uint64_t master,
                                                  std::uint64_t cell, const ExecPolicy& exec) {
  std::vector<std::optional<ZDraw>> out(m);
  parallel_for(m, exec, [&](std::size_t j) { out[j] = detail::rejection_one(replicate, n, truth, master, cell, j); });
  return out;
}

}  // namespace kernels
}  // namespace tailnorm
