#include "kelab/grid_field.hpp"

#include <cmath>

namespace kelab {

double kahan_sum(std::span<const double> x) {
  double s = 0.0, c = 0.0;
  for (double xi : x) {
    double y = xi - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double kahan_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double y = a[i] * b[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double sup_norm(std::span<const double> x) {
  double m = 0.0;
  for (double xi : x) m = std::max(m, std::abs(xi));
  return m;
}

}  // namespace kelab
