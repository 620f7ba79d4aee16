#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "odeco/tensor.hpp"

namespace odeco {

struct PowerMethodOptions {
  double tol = 1e-10;        // sweep-to-sweep vector change declaring convergence
  int max_iters = 500;       // sweeps per restart
  int restarts = 5;          // random starts per extracted term, best kept
  std::uint64_t seed = 1;
  double residual_tol = 1e-6;  // relative remainder above which the input is flagged
};

enum class DecomposeStatus { ok, nonconvergence, residual_floor };

struct DecomposeResult {
  DecomposeStatus status = DecomposeStatus::nonconvergence;
  std::optional<OdecoTensor> decomposition;  // canonical when present
  double relative_residual = 0.0;            // remainder norm over input norm
  std::string message;
};

// Greedy rank-one extraction by alternating power iteration with deflation.
// Each term takes the converged restart with the largest contraction; the
// weight signs resolve themselves through the normalization, so extracted
// weights are nonnegative. Recovered vectors are re-orthonormalized per
// mode and the weights refit against the original tensor. Exact for odeco
// input up to roundoff; anything else ends at a residual floor.
DecomposeResult power_method_decompose(const DenseTensor& tensor,
                                       const PowerMethodOptions& options = {});

}  // namespace odeco
