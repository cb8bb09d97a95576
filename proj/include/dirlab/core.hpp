#pragma once

// Circle and disk geometry, plus the quadrature rules shared by every module.
//
// Angles are radians stored in [0, 2*pi). Arcs are counter-clockwise from
// `start`; membership tests are half-open so that an arc set and its
// complement partition any uniform grid exactly.

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "dirlab/errors.hpp"

namespace dirlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta);

// Arclength distance on T, in [0, pi].
double circle_distance(double theta1, double theta2);

// |e^{i theta1} - e^{i theta2}| = 2 sin(d/2).
double chordal_distance(double theta1, double theta2);

class Arc {
 public:
  Arc(double start, double length);

  static Arc full_circle() { return Arc(0.0, kTwoPi); }
  // Counter-clockwise arc from `a` to `b`.
  static Arc between(double a, double b);

  double start() const { return start_; }
  double length() const { return length_; }
  // Unwrapped end point start + length (may exceed 2*pi).
  double end() const { return start_ + length_; }
  double midpoint() const { return wrap_angle(start_ + 0.5 * length_); }
  bool is_full() const { return length_ >= kTwoPi; }

  // Half-open membership [start, start + length).
  bool contains(double theta) const;
  // Arclength distance from theta to the closed arc (0 inside).
  double distance(double theta) const;
  // Euclidean distance from a disk point to the closed arc.
  double euclidean_distance(Complex z) const;

 private:
  double start_;
  double length_;
};

double total_length(std::span<const Arc> arcs);

// Complement of a union of arcs, as a sorted list of disjoint arcs.
std::vector<Arc> complement(std::span<const Arc> arcs);

// Distinct end points of a union of arcs (the boundary of the set in T).
std::vector<double> boundary_points(std::span<const Arc> arcs);

// Euclidean distance from z to the union (infinity for an empty union).
double euclidean_distance(Complex z, std::span<const Arc> arcs);

// Measure of the t-neighbourhood of a union of disjoint arcs, by explicit
// merging of the inflated arcs.
double inflated_measure(std::span<const Arc> arcs, double t);

// Uniform trapezoid grid on T: theta_k = 2*pi*k/n, weights 2*pi/n.
class CircleGrid {
 public:
  explicit CircleGrid(std::size_t n);

  std::size_t size() const { return n_; }
  double spacing() const { return kTwoPi / static_cast<double>(n_); }
  double weight() const { return spacing(); }
  double angle(std::size_t k) const { return spacing() * static_cast<double>(k); }
  std::vector<double> angles() const;

 private:
  std::size_t n_;
};

// Trapezoid approximation of the integral over T with respect to |d zeta|.
double integrate_circle(const CircleGrid& grid, std::span<const double> samples);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// m-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int m, double a = -1.0, double b = 1.0);

struct DiskGridParams {
  int points_per_panel = 16;  // Gauss-Legendre points per radial panel
  int boundary_layers = 8;    // geometric panels accumulating at |z| = 1
  double grading = 0.2;       // panel ratio toward the boundary, in s = r^2
  int min_angular = 16;
  int max_angular = 256;
};

struct DiskRing {
  double s;       // r^2
  double radius;
  double weight;  // area weight of the whole ring (sums to pi)
  int angular;    // even number of equispaced angles 2*pi*j/angular
};

// Tensor-product rule on D: Gauss-Legendre panels in s = r^2 on (0,1), the
// last `boundary_layers` panels geometrically graded toward s = 1, and a
// trapezoid rule in theta whose point count grows linearly with r.
class DiskGrid {
 public:
  explicit DiskGrid(const DiskGridParams& params = {});

  const DiskGridParams& params() const { return params_; }
  const std::vector<DiskRing>& rings() const { return rings_; }
  std::size_t size() const { return size_; }

  // Flattened node list, ring by ring.
  std::vector<Complex> points() const;
  std::vector<double> weights() const;

 private:
  DiskGridParams params_;
  std::vector<DiskRing> rings_;
  std::size_t size_ = 0;
};

double integrate_disk(const DiskGrid& grid, std::span<const double> values);
double integrate_disk(const DiskGrid& grid, const std::function<double(Complex)>& f);

}  // namespace dirlab
