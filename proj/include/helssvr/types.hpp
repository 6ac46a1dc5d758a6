#pragma once

#include <Eigen/Dense>

namespace helssvr {

/// Dense row-major matrix; one sample per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace helssvr
