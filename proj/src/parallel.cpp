#include "tailnorm/parallel.hpp"

#include <omp.h>

namespace tailnorm {

int resolved_threads(const ExecPolicy& policy) {
  if (!policy.parallel) return 1;
  return policy.threads > 0 ? policy.threads : omp_get_max_threads();
}

}  // namespace tailnorm
