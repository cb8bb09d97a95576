#pragma once

// Generalized Cantor sets on the circle.
//
// Level 0 is a closed arc of length a_0 centred at angle 0. Each level-k arc
// of length a_k keeps two sub-arcs of length a_{k+1} anchored at its end
// points, so the removed middle gap has length a_k - 2 a_{k+1}. Everything
// below is computed from the gap lengths, without materialising the 2^n arcs.

#include <cstdint>
#include <random>
#include <vector>

#include "dirlab/core.hpp"

namespace dirlab {

struct CantorSpec {
  double a0 = kPi;
  std::vector<double> ratios;  // a_{n+1} / a_n for n = 0 .. depth-1

  static CantorSpec geometric(double a0, double ratio, int depth);
  static CantorSpec from_lengths(const std::vector<double>& lengths);
  static CantorSpec middle_thirds(int depth) { return geometric(kPi, 1.0 / 3.0, depth); }

  int depth() const { return static_cast<int>(ratios.size()); }
  std::vector<double> lengths() const;  // a_0 .. a_depth
  double length(int n) const;

  // Throws InvalidArgument unless 0 < a_0 <= 2 pi and every ratio is in (0, 1/2).
  void validate() const;
};

struct LambdaMu {
  double lambda;  // sup of the provided ratios
  double mu;      // 1 - log 2 / log(1/lambda)
};

LambdaMu lambda_and_mu(const CantorSpec& spec);

// Complement components of one size: `count` gaps of length `length`.
struct GapClass {
  int level;  // 0 for the outer gap, k >= 1 for gaps opened at level k
  double length;
  std::uint64_t count;
};

// t -> |E_t| is piecewise affine, A_j + B_j t on [breaks[j], breaks[j+1]),
// the last piece extending to infinity. B_j equals N_E on that piece.
struct NeighborhoodProfile {
  std::vector<double> breaks;
  std::vector<double> intercept;
  std::vector<double> slope;

  double value(double t) const;
  std::size_t piece(double t) const;
};

class CantorLevel {
 public:
  CantorLevel(CantorSpec spec, int level);

  const CantorSpec& spec() const { return spec_; }
  int level() const { return level_; }
  double arc_length() const { return lengths_[level_]; }
  std::uint64_t arc_count() const { return std::uint64_t{1} << level_; }
  double measure() const;

  // index-th arc counter-clockwise from the left end of the initial arc.
  Arc arc(std::uint64_t index) const;
  // All 2^level arcs; refuses levels above 22.
  std::vector<Arc> arcs() const;

  // Arclength distance to the level set E_level.
  double distance(double theta) const;

  std::vector<GapClass> gap_classes() const;
  double neighborhood_measure(double t) const;
  std::uint64_t counting_function(double t) const;
  NeighborhoodProfile profile() const;

  // Exact integral of d(., E_level)^alpha over an arc (0^0 read as 0).
  double integrate_distance_power(const Arc& arc, double alpha) const;

 private:
  // Integral of d^alpha over [-pi, x] on the unrolled circle, x in [-pi, pi].
  double cumulative_distance_power(double x, double alpha) const;
  double arc_self_integral(int k, double alpha) const;

  CantorSpec spec_;
  int level_;
  std::vector<double> lengths_;
};

CantorLevel build_level(const CantorSpec& spec, int n);
double distance_to_set(double theta, const CantorLevel& level);
double neighborhood_measure(const CantorLevel& level, double t);
std::uint64_t counting_function(const CantorLevel& level, double t);

// Least-squares slope of log|E_t| against log t on a log-spaced grid.
double measure_exponent_fit(const CantorLevel& level, double t_lo, double t_hi, int samples = 64);

// The constant C in |E_t| <= C t^mu obtained by following the geometric
// covering argument: 3 a_0^{log 2 / log(1/lambda)}.
double measure_growth_constant(const CantorSpec& spec);

// min{1/2 - lambda, 1/4}^{alpha+1} / (alpha+1).
double kset_constant(double alpha, double lambda);

struct KsetAudit {
  double worst_ratio;
  Arc worst_arc{0.0, kTwoPi};
  double bound;  // kset_constant(alpha, lambda)
  int arcs_checked = 0;
  bool passed() const { return worst_ratio >= bound; }
};

// Minimum over sampled arcs I of (1/|I|) int_I d^alpha / |I|^alpha. Samples
// the full circle, every level-k arc with k < level, and `trials` random arcs
// with log-uniform length in [2 a_N, 2 pi].
KsetAudit kset_lower_bound_audit(const CantorLevel& level, double alpha, int trials,
                                 std::uint64_t seed = 1);

// int_{a_N/2}^{pi} |E_t| / t dt, exact for the piecewise affine profile.
double carleson_integral(const CantorLevel& level);

}  // namespace dirlab
