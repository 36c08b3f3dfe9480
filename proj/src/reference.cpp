// Serial reference loops for the OpenMP kernels.

#include "tailnorm/kernels.hpp"

namespace tailnorm::reference {

std::vector<EstimateRecord> bootstrap_estimates(const Sample& s, const ShapeEstimator& estimator, std::size_t reps,
                                                std::uint64_t key) {
  std::vector<EstimateRecord> out;
  out.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) out.push_back(detail::bootstrap_one(s, estimator, key, r));
  return out;
}

std::vector<double> null_statistics(NullStatistic kind, std::size_t n, std::size_t reps, std::uint64_t key) {
  std::vector<double> out;
  out.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) out.push_back(detail::null_one(kind, n, key, r));
  return out;
}

std::vector<EstimateRecord> replicate_estimates(const ReplicateEstimator& estimator,
                                                const std::vector<Method>& methods, std::size_t n,
                                                const GpdParams& truth, std::size_t m, std::uint64_t master,
                                                std::uint64_t cell) {
  std::vector<EstimateRecord> out(m * methods.size());
  for (std::size_t j = 0; j < m; ++j)
    detail::replicate_one(estimator, methods, n, truth, master, cell, j, out.data() + j * methods.size());
  return out;
}

std::vector<std::optional<ZDraw>> rejection_draws(const RejectionReplicate& replicate, std::size_t n,
                                                  const GpdParams& truth, std::size_t m, std::uint64_t master,
                                                  std::uint64_t cell) {
  std::vector<std::optional<ZDraw>> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) out.push_back(detail::rejection_one(replicate, n, truth, master, cell, j));
  return out;
}

}  // namespace tailnorm::reference
