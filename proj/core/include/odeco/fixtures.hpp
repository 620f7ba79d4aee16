#pragma once

#include "odeco/tensor.hpp"

namespace odeco {

// The worked 2x3x3 example: e1 (x) e1 (x) e1 + e2 (x) e2 (x) e2. Six
// isolated tuples, five 1-dimensional base components meeting in two
// isolated intersection points.
OdecoTensor demo233_odeco();

// Fixed integer direction used by the perturbation experiments on the
// example above.
DenseTensor demo233_perturbation();

}  // namespace odeco
