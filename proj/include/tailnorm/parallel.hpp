#pragma once

#include <cstddef>

namespace tailnorm {

/// How a data-parallel kernel runs. Results never depend on these settings.
struct ExecPolicy {
  bool parallel = true;
  int threads = 0;  // 0 = OpenMP default

  static ExecPolicy serial() { return {false, 1}; }
};

/// Number of worker threads a policy resolves to.
int resolved_threads(const ExecPolicy& policy);

}  // namespace tailnorm
