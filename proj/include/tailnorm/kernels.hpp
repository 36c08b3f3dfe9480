#pragma once

// Data-parallel kernels. Every kernel in `kernels` runs its outer loop under
// OpenMP; the same kernel in `reference` is a plain serial loop computing the
// identical result. Tests hold the two to bitwise equality.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tailnorm/estimators.hpp"
#include "tailnorm/normtest.hpp"
#include "tailnorm/parallel.hpp"
#include "tailnorm/simlab.hpp"

namespace tailnorm {
namespace kernels {

std::vector<EstimateRecord> bootstrap_estimates(const Sample& s, const ShapeEstimator& estimator,
                                                std::size_t reps, std::uint64_t key,
                                                const ExecPolicy& exec);

std::vector<double> null_statistics(NullStatistic kind, std::size_t n, std::size_t reps,
                                    std::uint64_t key, const ExecPolicy& exec);

/// estimates[j * methods.size() + i] for replicate j and methods[i]; every
/// method sees the same replicate stream.
std::vector<EstimateRecord> replicate_estimates(const ReplicateEstimator& estimator,
                                                const std::vector<Method>& methods, std::size_t n,
                                                const GpdParams& truth, std::size_t m,
                                                std::uint64_t master, std::uint64_t cell,
                                                const ExecPolicy& exec);

std::vector<std::optional<ZDraw>> rejection_draws(const RejectionReplicate& replicate, std::size_t n,
                                                  const GpdParams& truth, std::size_t m,
                                                  std::uint64_t master, std::uint64_t cell,
                                                  const ExecPolicy& exec);

}  // namespace kernels

namespace reference {

std::vector<EstimateRecord> bootstrap_estimates(const Sample& s, const ShapeEstimator& estimator,
                                                std::size_t reps, std::uint64_t key);

std::vector<double> null_statistics(NullStatistic kind, std::size_t n, std::size_t reps,
                                    std::uint64_t key);

std::vector<EstimateRecord> replicate_estimates(const ReplicateEstimator& estimator,
                                                const std::vector<Method>& methods, std::size_t n,
                                                const GpdParams& truth, std::size_t m,
                                                std::uint64_t master, std::uint64_t cell);

std::vector<std::optional<ZDraw>> rejection_draws(const RejectionReplicate& replicate, std::size_t n,
                                                  const GpdParams& truth, std::size_t m,
                                                  std::uint64_t master, std::uint64_t cell);

}  // namespace reference

namespace detail {

// Per-index bodies shared by both loop structures.
EstimateRecord bootstrap_one(const Sample& s, const ShapeEstimator& estimator, std::uint64_t key,
                             std::size_t rep);
double null_one(NullStatistic kind, std::size_t n, std::uint64_t key, std::size_t rep);
void replicate_one(const ReplicateEstimator& estimator, const std::vector<Method>& methods,
                   std::size_t n, const GpdParams& truth, std::uint64_t master, std::uint64_t cell,
                   std::size_t j, EstimateRecord* out);
std::optional<ZDraw> rejection_one(const RejectionReplicate& replicate, std::size_t n,
                                   const GpdParams& truth, std::uint64_t master, std::uint64_t cell,
                                   std::size_t j);

}  // namespace detail
}  // namespace tailnorm
