#include "covfield/simplex.hpp"

#include <algorithm>
#include <functional>

#include "covfield/error.hpp"

namespace covfield {

std::vector<double> project_simplex(std::span<const double> y) {
  if (y.empty()) throw Error(ErrorKind::InvalidArgument, "cannot project an empty vector");
  std::vector<double> u(y.begin(), y.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / double(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  std::vector<double> x(y.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    x[i] = std::max(y[i] - tau, 0.0);
    sum += x[i];
  }
  // one rescale pass removes the last few ulps of drift in the sum
  for (double& v : x) v /= sum;
  return x;
}

}  // namespace covfield
