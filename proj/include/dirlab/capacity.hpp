#pragma once

// alpha-energies of discrete measures on the circle, equilibrium measures on
// finite supports, and the integral test for zero capacity of Cantor sets.
//
// Kernel: k_alpha(t) = t^{-alpha} for alpha > 0, log(1/t) for alpha = 0.
// Atoms carry a smear half-width h: atom i stands for the uniform
// probability measure on the arc of length 2h_i centred at theta_i.

#include <cstdint>
#include <string>
#include <vector>

#include "dirlab/cantor.hpp"
#include "dirlab/core.hpp"

namespace dirlab {

// +infinity at t = 0.
double kernel(double alpha, double t);

// Mean of k_alpha(|x - y|) over x, y uniform on an interval of length 2h.
double self_energy(double alpha, double h);

struct DiscreteMeasure {
  std::vector<double> angles;
  std::vector<double> weights;
  std::vector<double> smear;

  std::size_t size() const { return angles.size(); }
  void validate() const;

  // n equal atoms at 2 pi k / n, smear pi / n (the cells tile the circle).
  static DiscreteMeasure uniform(std::size_t n);
  // Each atom split into two half-weight atoms at +-h/2 with smear h/2. The
  // Fourier coefficients are unchanged; the kernel energy converges.
  DiscreteMeasure refined() const;
};

// Half the distance to the nearest other support point, for every point.
std::vector<double> nearest_neighbor_smear(const std::vector<double>& angles);

// sum_{i != j} w_i w_j k(|zeta_i - zeta_j|) + sum_i w_i^2 S(h_i), with chordal
// separations. Returns +infinity when an unsmeared atom meets itself or two
// atoms coincide.
double energy_kernel(const DiscreteMeasure& mu, double alpha, bool include_self = true);

// mu_hat(n) = sum_i w_i e^{-i n theta_i} sinc(n h_i), n = 0 .. modes.
std::vector<Complex> fourier_coefficients(const DiscreteMeasure& mu, int modes);

// sum_{n=0}^{modes} |mu_hat(n)|^2 / (1+n)^{1-alpha}.
double energy_fourier(const DiscreteMeasure& mu, double alpha, int modes);

struct EnergyReport {
  double alpha;
  double kernel_energy;
  double fourier_energy;
  int truncation;
  double ratio() const { return kernel_energy / fourier_energy; }
};

EnergyReport energy_report(const DiscreteMeasure& mu, double alpha, int modes);

struct SolverParams {
  int max_iterations = 200000;
  double gap_tolerance = 1e-10;
  int refresh_every = 64;  // recompute K w from scratch this often
  bool polish = true;      // solve the KKT system on the active face when it settles
  bool record_trace = true;
};

struct SolverResult {
  std::vector<double> weights;
  double energy = 0.0;
  // max of (Kw)_i over the active set minus min over all i: bounds the
  // suboptimality of w^T K w on the simplex.
  double duality_gap = 0.0;
  double fw_gap = 0.0;  // w^T K w - min_i (Kw)_i
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;
};

// Minimise w^T K w over the probability simplex by Frank-Wolfe with away
// steps and exact line search. K is row-major n x n, symmetric.
SolverResult minimize_on_simplex(const std::vector<double>& K, std::size_t n,
                                 const SolverParams& params = {});

// Kernel matrix of the energy quadratic form for the given atoms.
std::vector<double> kernel_matrix(const std::vector<double>& angles,
                                  const std::vector<double>& smear, double alpha);

struct EquilibriumResult {
  DiscreteMeasure measure;
  SolverResult solver;
  double energy() const { return solver.energy; }
  double capacity() const { return 1.0 / solver.energy; }
};

EquilibriumResult equilibrium_measure(const std::vector<double>& support, double alpha,
                                      const SolverParams& params = {});

enum class LadderVerdict { divergent, convergent, inconclusive };
const char* to_string(LadderVerdict v);

struct LadderRung {
  double epsilon;
  double integral;
  double slope;  // growth per e-fold of 1/epsilon since the previous rung
};

struct LadderClassification {
  LadderVerdict verdict;
  std::vector<LadderRung> rungs;
  std::string reason;
};

// Divergent when the last `window` slopes are all >= threshold; convergent
// when they are all below it and nonincreasing; inconclusive otherwise.
LadderClassification classify_ladder(const std::vector<double>& epsilons,
                                     const std::vector<double>& integrals,
                                     double threshold = 0.1, int window = 3);

enum class CapacityVerdict { zero, positive, inconclusive };
const char* to_string(CapacityVerdict v);

struct CapacityTestParams {
  int depth = -1;  // defaults to the spec depth
  double slope_threshold = 0.1;
  int window = 3;
};

struct CapacityZeroReport {
  CapacityVerdict verdict;
  double alpha;
  int depth;
  LadderClassification ladder;
};

// J(eps) = int_eps^pi dt / (t^alpha |E_t|) on the ladder eps_k = a_k.
double capacity_integral(const NeighborhoodProfile& profile, double alpha, double eps);

CapacityZeroReport cantor_capacity_zero_test(const CantorSpec& spec, double alpha,
                                             const CapacityTestParams& params = {});

}  // namespace dirlab
