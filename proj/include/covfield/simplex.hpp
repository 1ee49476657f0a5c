#pragma once

#include <span>
#include <vector>

namespace covfield {

/// Euclidean projection onto the probability simplex {x >= 0, sum x = 1} by sorting and
/// thresholding: x_i = max(y_i - tau, 0) with tau chosen so the result sums to one.
std::vector<double> project_simplex(std::span<const double> y);

}  // namespace covfield
