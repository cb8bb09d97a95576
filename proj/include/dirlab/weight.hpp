#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dirlab {

// Increasing weight w : [0, pi] -> [0, inf) with its derivative, piecewise
// analytic between sorted breakpoints.
struct WeightProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::vector<double> breakpoints;
  std::string name;
  std::optional<double> rho, sigma, gamma;

  double operator()(double t) const { return value(t); }

  // scale * t^beta.
  static WeightProfile power(double beta, double scale = 1.0);
  static WeightProfile constant(double c);
};

// Throws InvalidArgument unless w is positive and nondecreasing on a log grid
// of (0, pi] (the weight of an outer modulus may only vanish at t = 0).
void validate_weight(const WeightProfile& w, int samples = 400);

}  // namespace dirlab
