#pragma once

// Cyclicity construction for outer functions vanishing on a Cantor set:
// the comparison function phi, its regularised envelope psi, the weights w_delta
// built from psi, the campaign that tracks f_{w_delta} as delta -> 0, and the
// zero-set capacity diagnostic for a sampled boundary modulus.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dirlab/cantor.hpp"
#include "dirlab/capacity.hpp"
#include "dirlab/outer.hpp"
#include "dirlab/weight.hpp"

namespace dirlab {

struct CyclicityParams {
  double rho;
  double sigma;
};

// One and two thirds of the window (1-alpha)/2 < rho < sigma < min{1-alpha, (1-alpha+mu)/2}.
CyclicityParams select_params(double alpha, double mu);

// phi(t) = max{min{|E_t|, t^sigma}, t^{1-alpha}}.
std::function<double(double)> phi_from_set(const CantorLevel& level, double alpha, double sigma);

struct EnvelopeOptions {
  double t_min = 0.0;  // default: a_N / 2 of the level the caller works with
  int per_decade = 400;
};

// psi(t) = t^rho sup_{t_min <= s <= t} phi(s) / s^rho on a log grid of
// [t_min, pi]; between nodes log(psi / t^rho) is interpolated linearly in log t.
class RegularizedWeight {
 public:
  // Validates on the grid that phi > 0, phi(t)/t is nonincreasing and
  // phi <= t^sigma on (0, 1]; throws InvalidArgument naming the failure.
  RegularizedWeight(std::function<double(double)> phi, double rho, double sigma, double alpha,
                    const EnvelopeOptions& opt);

  double rho() const { return rho_; }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }
  double t_min() const { return t_.front(); }
  const std::vector<double>& nodes() const { return t_; }
  const std::vector<double>& phi_values() const { return phi_; }
  const std::vector<double>& psi_values() const { return psi_; }
  const std::vector<double>& envelope() const { return ratio_; }  // psi / t^rho at the nodes
  const std::function<double(double)>& phi() const { return phi_fn_; }

  double psi(double t) const;
  // int_t^pi ds / (s^alpha psi(s)), t in [t_min, pi].
  double tail_integral(double t) const;

 private:
  std::size_t cell(double t) const;
  double cell_integral(std::size_t i, double a, double b) const;

  std::function<double(double)> phi_fn_;
  double rho_, sigma_, alpha_;
  std::vector<double> t_, phi_, ratio_, psi_, tail_;
};

struct EnvelopeCheck {
  bool ratio_nondecreasing = true;  // psi/t^rho, exact comparison of stored values
  bool dominates_phi = true;        // phi <= psi
  bool below_t_sigma = true;        // psi <= t^sigma on (0, 1], relative slack 1e-12
  std::size_t nodes = 0;
  bool passed() const { return ratio_nondecreasing && dominates_phi && below_t_sigma; }
};

EnvelopeCheck check_envelope(const RegularizedWeight& psi);

// int_eps^pi dt / (t^alpha psi) on eps_k = a_k, k = 1..level, classified by classify_ladder.
LadderClassification divergence_ladder(const RegularizedWeight& psi, const CantorLevel& level,
                                       double slope_threshold = 0.1, int window = 3);

struct ClaimRung {
  double eps;
  double phi_integral;  // int_eps^pi dt / (t^alpha phi)
  double log_set_integral;  // log int_eps^pi dt / (t^alpha |E_t|)
  double ratio;  // NaN while the logarithm is not positive
};

// Lower-bound chain between the phi integral and the log of the set integral,
// on eps_k = a_k.
std::vector<ClaimRung> claim_chain(const RegularizedWeight& psi, const CantorLevel& level);

// The three-piece weight
//   (delta^rho / psi(delta)) t^{1-alpha-rho}   on [0, delta]
//   A - log int_t^pi ds / (s^alpha psi)        on (delta, eta]
//   1                                          on (eta, pi].
class WDelta {
 public:
  WDelta(std::shared_ptr<const RegularizedWeight> psi, double delta);

  double delta() const { return delta_; }
  double A() const { return A_; }
  double eta() const { return eta_; }
  double value(double t) const;
  double derivative(double t) const;
  // |w(delta+) - w(delta-)| + |w(eta+) - w(eta-)|.
  double continuity_defect() const;
  WeightProfile profile() const;

 private:
  std::shared_ptr<const RegularizedWeight> psi_;
  double delta_, A_, eta_, scale_, exponent_;
};

struct CampaignRecord {
  double delta = 0.0;
  double A_delta = 0.0;
  double eta_delta = 0.0;
  double f0 = 0.0;          // |f(0)|
  double norm_alpha = 0.0;  // |f(0)|^2 + D_alpha(f)
  double dirichlet = 0.0;   // D_alpha(f)
  double fw_bound = 0.0;    // int w'^2 t^{1+alpha} N_E dt
  double fw_ratio = 0.0;
  double offset_fraction = 0.0;  // grid fraction with ||f*| - 1| > offset_eps
  bool concavity_ok = false;
};

struct SurrogateVerdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CampaignOptions {
  double alpha = 0.7;
  std::vector<double> deltas;  // default pi 2^{-k}, k = 3..12, kept above a_N
  int depth = 20;
  std::size_t n = 16384;
  int angular_factor = 2;
  double offset_eps = 0.1;
  double offset_shrink = 2.0;
  double final_f0 = 0.9;
  double norm_spread = 10.0;
  double fw_spread = 10.0;
  int per_decade = 400;
  CapacityTestParams capacity;
};

struct CampaignReport {
  CampaignOptions options;
  CapacityZeroReport capacity;
  double mu = 0.0;
  CyclicityParams params{};
  EnvelopeCheck envelope;
  LadderClassification divergence;
  std::vector<CampaignRecord> records;
  std::vector<SurrogateVerdict> verdicts;
  double seconds = 0.0;
  bool passed() const;
};

std::vector<double> default_delta_ladder(const CantorLevel& level, int k_first = 3, int k_last = 12);

// Throws AuditRefused unless the capacity test at the campaign depth says "zero".
CampaignReport cyclicity_run(const CantorSpec& spec, const CampaignOptions& opt);

enum class NecessaryVerdict { trivially_passes, not_cyclic, growing, saturating, inconclusive };
const char* to_string(NecessaryVerdict v);

struct SublevelRung {
  double threshold;
  double measure;  // grid measure of {|f*| < threshold}
  std::size_t nodes = 0;
  std::size_t support = 0;  // equilibrium support size after subsampling
  double energy = 0.0;
};

struct NecessaryConditionReport {
  NecessaryVerdict verdict = NecessaryVerdict::inconclusive;
  std::string reason;
  std::vector<SublevelRung> rungs;
  LadderClassification ladder;
};

struct NecessaryConditionOptions {
  int rungs = 16;
  std::size_t max_support = 384;
  int max_zero_run = 3;
  double slope_threshold = 0.1;
  int window = 3;
};

// Sublevel sets Z_j = {|f*| < threshold_j} on the grid, thresholds geometric
// from `threshold` down to the smallest finite sample; minimum alpha-energy of
// each distinct set, classified against its measure.
// Growing energy is consistent with a zero set of capacity zero; saturating
// energy points to positive capacity, which rules out cyclicity.
NecessaryConditionReport necessary_condition_check(const BoundaryModulus& modulus, double alpha, double threshold,
                                                   const NecessaryConditionOptions& opt = {});

}  // namespace dirlab
