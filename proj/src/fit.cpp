#include "spherebl/fit.hpp"

#include <cmath>

#include "spherebl/error.hpp"

namespace spherebl {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("fit needs as many x as y values");
  if (x.size() < 2) throw InvalidType("fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidType("fit abscissae are all equal");
  LineFit out;
  out.points = static_cast<int>(x.size());
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - out.intercept - out.slope * x[i];
      rss += r * r;
    }
    const double s2 = rss / (n - 2.0);
    out.slope_std_error = std::sqrt(s2 / sxx);
    out.intercept_std_error = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return out;
}

}  // namespace spherebl
