#pragma once

#include <Eigen/Dense>

#include <vector>

namespace dclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Hard cluster assignment, one entry per sample.
using Labels = std::vector<int>;

}  // namespace dclust
