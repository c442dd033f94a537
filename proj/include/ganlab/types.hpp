#pragma once

#include <Eigen/Dense>

namespace ganlab {

// All numerics are 64-bit floats. Batches are stored one example per row,
// so storage is row-major to keep an example contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using Index = Eigen::Index;

}  // namespace ganlab
