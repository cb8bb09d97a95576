#include "dirlab/weight.hpp"

#include <cmath>

#include "dirlab/core.hpp"

namespace dirlab {

WeightProfile WeightProfile::power(double beta, double scale) {
  if (!(beta >= 0.0) || !(scale > 0.0)) throw InvalidArgument("power weight needs beta >= 0, scale > 0");
  WeightProfile w;
  w.value = [=](double t) { return scale * std::pow(t, beta); };
  w.derivative = [=](double t) { return beta == 0.0 ? 0.0 : scale * beta * std::pow(t, beta - 1.0); };
  w.name = "t^" + std::to_string(beta);
  return w;
}

WeightProfile WeightProfile::constant(double c) {
  if (!(c > 0.0)) throw InvalidArgument("constant weight must be positive");
  WeightProfile w;
  w.value = [=](double) { return c; };
  w.derivative = [](double) { return 0.0; };
  w.name = "constant";
  return w;
}

void validate_weight(const WeightProfile& w, int samples) {
  if (!w.value) throw InvalidArgument("weight has no value function");
  double prev = 0.0;
  for (int i = 0; i < samples; ++i) {
    double t = kPi * std::pow(1e-12, 1.0 - static_cast<double>(i) / (samples - 1));
    double v = w.value(t);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("weight " + w.name + " is not positive and finite at t = " + std::to_string(t));
    }
    if (v < prev * (1.0 - 1e-12)) throw InvalidArgument("weight " + w.name + " is not increasing");
    prev = v;
  }
}

}  // namespace dirlab
