#pragma once

#include <Eigen/Dense>

namespace cocokit {

/** Scalar type: 64-bit IEEE double everywhere, so traces are reproducible. */
using scalar_t = double;

/** Dense coordinate vector, the common currency for actions, gradients and
 *  oracle directions. */
using vector_t = Eigen::Matrix<scalar_t, Eigen::Dynamic, 1>;

using index_t = Eigen::Index;

}  // namespace cocokit
