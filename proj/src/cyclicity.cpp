#include "dirlab/cyclicity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "dirlab/dirichlet.hpp"
#include "dirlab/parallel.hpp"

namespace dirlab {
namespace {

const GaussRule& cell_rule() {
  static const GaussRule rule = gauss_legendre(6, 0.0, 1.0);
  return rule;
}

// int_a^b g(t) dt / t^alpha with the substitution t = e^u.
double log_gauss(const std::function<double(double)>& g, double alpha, double a, double b) {
  const GaussRule& q = cell_rule();
  double ua = std::log(a), ub = std::log(b), sum = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    double t = std::exp(ua + (ub - ua) * q.nodes[i]);
    sum += q.weights[i] * std::pow(t, 1.0 - alpha) * g(t);
  }
  return sum * (ub - ua);
}

}  // namespace

CyclicityParams select_params(double alpha, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive: the Cantor data leave no parameter window");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
  double lo = (1.0 - alpha) / 2.0;
  double hi = std::min(1.0 - alpha, (1.0 - alpha + mu) / 2.0);
  return {lo + (hi - lo) / 3.0, lo + 2.0 * (hi - lo) / 3.0};
}

std::function<double(double)> phi_from_set(const CantorLevel& level, double alpha, double sigma) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
  if (!(sigma > 0.0 && sigma < 1.0 - alpha)) throw InvalidArgument("sigma must lie in (0, 1 - alpha)");
  auto profile = std::make_shared<NeighborhoodProfile>(level.profile());
  return [profile, alpha, sigma](double t) {
    return std::max(std::min(profile->value(t), std::pow(t, sigma)), std::pow(t, 1.0 - alpha));
  };
}

RegularizedWeight::RegularizedWeight(std::function<double(double)> phi, double rho, double sigma, double alpha,
                                     const EnvelopeOptions& opt)
    : phi_fn_(std::move(phi)), rho_(rho), sigma_(sigma), alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
  if (!(rho > 0.0 && rho < sigma)) throw InvalidArgument("rho must lie in (0, sigma)");
  if (!(opt.t_min > 0.0 && opt.t_min < kPi)) throw InvalidArgument("t_min must lie in (0, pi)");
  if (opt.per_decade < 4) throw InvalidArgument("need at least 4 nodes per decade");
  std::size_t cells = static_cast<std::size_t>(std::ceil(opt.per_decade * std::log10(kPi / opt.t_min)));
  cells = std::max<std::size_t>(cells, 8);
  double lmin = std::log(opt.t_min), lmax = std::log(kPi);
  for (std::size_t i = 0; i <= cells; ++i) t_.push_back(std::exp(lmin + (lmax - lmin) * i / cells));
  t_.front() = opt.t_min;
  t_.back() = kPi;

  for (double t : t_) phi_.push_back(phi_fn_(t));
  for (std::size_t i = 0; i < t_.size(); ++i) {
    double t = t_[i];
    if (!(phi_[i] > 0.0) || !std::isfinite(phi_[i])) {
      throw InvalidArgument("phi must be positive and finite (fails at t = " + std::to_string(t) + ")");
    }
    if (i > 0 && phi_[i] / t > phi_[i - 1] / t_[i - 1] * (1.0 + 1e-12)) {
      throw InvalidArgument("phi(t)/t must be nonincreasing (fails at t = " + std::to_string(t) + ")");
    }
    if (t <= 1.0 && phi_[i] > std::pow(t, sigma) * (1.0 + 1e-12)) {
      throw InvalidArgument("phi must not exceed t^sigma on (0, 1] (fails at t = " + std::to_string(t) + ")");
    }
  }

  double running = 0.0;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    running = std::max(running, phi_[i] / std::pow(t_[i], rho));
    ratio_.push_back(running);
    psi_.push_back(std::max(phi_[i], std::pow(t_[i], rho) * running));
  }
  tail_.assign(t_.size(), 0.0);
  for (std::size_t i = t_.size() - 1; i-- > 0;) tail_[i] = tail_[i + 1] + cell_integral(i, t_[i], t_[i + 1]);
}

std::size_t RegularizedWeight::cell(double t) const {
  if (!(t >= t_.front() && t <= t_.back())) {
    throw OutOfRange("t = " + std::to_string(t) + " outside the envelope grid [" + std::to_string(t_.front()) +
                     ", pi]");
  }
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - t_.begin());
  return std::min(i == 0 ? 0 : i - 1, t_.size() - 2);
}

double RegularizedWeight::psi(double t) const {
  std::size_t i = cell(t);
  if (t == t_[i]) return psi_[i];
  if (t == t_[i + 1]) return psi_[i + 1];
  double x = std::log(t / t_[i]) / std::log(t_[i + 1] / t_[i]);
  return std::pow(t, rho_) * std::pow(ratio_[i], 1.0 - x) * std::pow(ratio_[i + 1], x);
}

double RegularizedWeight::cell_integral(std::size_t, double a, double b) const {
  if (b <= a) return 0.0;
  return log_gauss([this](double s) { return 1.0 / psi(s); }, alpha_, a, b);
}

double RegularizedWeight::tail_integral(double t) const {
  std::size_t i = cell(t);
  return tail_[i + 1] + cell_integral(i, t, t_[i + 1]);
}

EnvelopeCheck check_envelope(const RegularizedWeight& psi) {
  EnvelopeCheck c;
  const auto& t = psi.nodes();
  const auto& ratio = psi.envelope();
  const auto& phi = psi.phi_values();
  const auto& val = psi.psi_values();
  c.nodes = t.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && ratio[i] < ratio[i - 1]) c.ratio_nondecreasing = false;
    if (phi[i] > val[i]) c.dominates_phi = false;
    if (t[i] <= 1.0 && val[i] > std::pow(t[i], psi.sigma()) * (1.0 + 1e-12)) c.below_t_sigma = false;
  }
  return c;
}

LadderClassification divergence_ladder(const RegularizedWeight& psi, const CantorLevel& level,
                                       double slope_threshold, int window) {
  std::vector<double> eps, J;
  auto a = level.spec().lengths();
  for (int k = 1; k <= level.level(); ++k) {
    if (a[k] < psi.t_min()) break;
    eps.push_back(a[k]);
    J.push_back(psi.tail_integral(a[k]));
  }
  return classify_ladder(eps, J, slope_threshold, window);
}

std::vector<ClaimRung> claim_chain(const RegularizedWeight& psi, const CantorLevel& level) {
  const auto& t = psi.nodes();
  const auto& phi = psi.phi();
  const double alpha = psi.alpha();
  auto inv_phi = [&](double s) { return 1.0 / phi(s); };
  std::vector<double> tail(t.size(), 0.0);
  for (std::size_t i = t.size() - 1; i-- > 0;) tail[i] = tail[i + 1] + log_gauss(inv_phi, alpha, t[i], t[i + 1]);
  NeighborhoodProfile prof = level.profile();
  auto a = level.spec().lengths();
  std::vector<ClaimRung> out;
  for (int k = 1; k <= level.level(); ++k) {
    double eps = a[k];
    if (eps < t.front()) break;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), eps) - t.begin());
    i = std::min(i == 0 ? 0 : i - 1, t.size() - 2);
    ClaimRung r{eps, tail[i + 1] + log_gauss(inv_phi, alpha, eps, t[i + 1]),
                std::log(capacity_integral(prof, alpha, eps)), 0.0};
    r.ratio = r.log_set_integral > 0.0 ? r.phi_integral / r.log_set_integral : NAN;
    out.push_back(r);
  }
  return out;
}

WDelta::WDelta(std::shared_ptr<const RegularizedWeight> psi, double delta) : psi_(std::move(psi)), delta_(delta) {
  if (!psi_) throw InvalidArgument("missing envelope");
  if (!(delta > 0.0 && delta < kPi / 2)) throw InvalidArgument("delta must lie in (0, pi/2)");
  if (delta < psi_->t_min()) throw InvalidArgument("delta lies below the envelope grid");
  const double alpha = psi_->alpha(), rho = psi_->rho();
  double psi_delta = psi_->psi(delta);
  scale_ = std::pow(delta, rho) / psi_delta;
  exponent_ = 1.0 - alpha - rho;
  double start = std::pow(delta, 1.0 - alpha) / psi_delta;
  A_ = start + std::log(psi_->tail_integral(delta));
  if (!(start <= 1.0 + 1e-12)) throw NumericalError("w_delta starts above 1: psi(delta) < delta^{1-alpha}");
  // A - log tail(t) increases from `start` at delta to +infinity at pi.
  double lo = delta, hi = kPi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = std::sqrt(lo * hi);
    double tail = psi_->tail_integral(mid);
    if (tail > 0.0 && A_ - std::log(tail) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  eta_ = hi;
  if (!(eta_ > delta_ && eta_ <= kPi)) throw NumericalError("bisection for eta_delta left its bracket");
}

double WDelta::value(double t) const {
  if (t <= 0.0) return 0.0;
  if (t <= delta_) return scale_ * std::pow(t, exponent_);
  if (t <= eta_) return std::min(1.0, A_ - std::log(psi_->tail_integral(t)));
  return 1.0;
}

double WDelta::derivative(double t) const {
  if (t <= 0.0) return 0.0;
  if (t <= delta_) return scale_ * exponent_ * std::pow(t, exponent_ - 1.0);
  if (t <= eta_) return 1.0 / (std::pow(t, psi_->alpha()) * psi_->psi(t) * psi_->tail_integral(t));
  return 0.0;
}

double WDelta::continuity_defect() const {
  double left = scale_ * std::pow(delta_, exponent_);
  double right = A_ - std::log(psi_->tail_integral(delta_));
  double top = A_ - std::log(psi_->tail_integral(eta_));
  return std::abs(left - right) + std::abs(top - 1.0);
}

WeightProfile WDelta::profile() const {
  auto self = std::make_shared<WDelta>(*this);
  WeightProfile w;
  w.value = [self](double t) { return self->value(t); };
  w.derivative = [self](double t) { return self->derivative(t); };
  w.breakpoints = {delta_, eta_};
  std::ostringstream name;
  name << "w_delta(" << delta_ << ")";
  w.name = name.str();
  w.rho = psi_->rho();
  w.sigma = psi_->sigma();
  return w;
}

std::vector<double> default_delta_ladder(const CantorLevel& level, int k_first, int k_last) {
  std::vector<double> d;
  for (int k = k_first; k <= k_last; ++k) {
    double delta = std::ldexp(kPi, -k);
    if (delta < level.arc_length()) break;
    d.push_back(delta);
  }
  return d;
}

bool CampaignReport::passed() const {
  for (const auto& v : verdicts) {
    if (!v.passed) return false;
  }
  return !verdicts.empty();
}

CampaignReport cyclicity_run(const CantorSpec& spec, const CampaignOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  spec.validate();
  if (opt.depth < 1 || opt.depth > spec.depth()) throw InvalidArgument("campaign depth must lie in [1, spec depth]");
  if (opt.n < 64 || opt.n % 2 != 0) throw InvalidArgument("circle resolution must be even and >= 64");
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  CampaignReport rep;
  rep.options = opt;
  CapacityTestParams cp = opt.capacity;
  cp.depth = opt.depth;
  rep.capacity = cantor_capacity_zero_test(spec, opt.alpha, cp);
  if (rep.capacity.verdict != CapacityVerdict::zero) {
    throw AuditRefused(std::string("the set is not of alpha-capacity zero by the integral test (verdict: ") +
                       to_string(rep.capacity.verdict) + ", " + rep.capacity.ladder.reason + ")");
  }
  CantorLevel level = build_level(spec, opt.depth);
  rep.mu = lambda_and_mu(spec).mu;
  rep.params = select_params(opt.alpha, rep.mu);
  auto phi = phi_from_set(level, opt.alpha, rep.params.sigma);
  auto psi = std::make_shared<const RegularizedWeight>(
      phi, rep.params.rho, rep.params.sigma, opt.alpha, EnvelopeOptions{0.5 * level.arc_length(), opt.per_decade});
  rep.envelope = check_envelope(*psi);
  rep.divergence = divergence_ladder(*psi, level);

  std::vector<double> deltas = opt.deltas.empty() ? default_delta_ladder(level) : opt.deltas;
  if (deltas.size() < 2) throw InvalidArgument("the delta ladder needs at least two rungs");
  rep.records.resize(deltas.size());
  parallel_for(deltas.size(), [&](std::size_t i) {
    WDelta wd(psi, deltas[i]);
    WeightProfile w = wd.profile();
    FwOptions fo;
    fo.n = opt.n;
    fo.angular_factor = opt.angular_factor;
    fo.enforce_concavity = false;
    FwAudit audit = fw_estimate_audit(w, level, opt.alpha, fo);
    OuterFunction f = outer_from_weight(w, level, opt.n);
    CampaignRecord& r = rep.records[i];
    r.delta = deltas[i];
    r.A_delta = wd.A();
    r.eta_delta = wd.eta();
    r.f0 = std::abs(f.value_at_zero());
    r.dirichlet = audit.lhs;
    r.norm_alpha = r.f0 * r.f0 + audit.lhs;
    r.fw_bound = audit.rhs;
    r.fw_ratio = audit.ratio;
    r.concavity_ok = audit.concavity.ok();
    std::size_t off = 0;
    for (double v : f.logmod()) off += std::abs(std::exp(v) - 1.0) > opt.offset_eps;
    r.offset_fraction = static_cast<double>(off) / static_cast<double>(opt.n);
  });

  const auto& R = rep.records;
  std::ostringstream s;
  {
    double first = R.front().offset_fraction, last = R.back().offset_fraction;
    s << "offset fraction " << first << " -> " << last << ", required shrink " << opt.offset_shrink << "x";
    rep.verdicts.push_back({"boundary modulus tends to 1", first == 0.0 || last * opt.offset_shrink <= first, s.str()});
  }
  {
    bool mono = true;
    for (std::size_t i = 1; i < R.size(); ++i) mono = mono && R[i].f0 >= R[i - 1].f0;
    s.str("");
    s << "|f(0)| " << R.front().f0 << " -> " << R.back().f0 << (mono ? ", nondecreasing" : ", not monotone")
      << ", required final >= " << opt.final_f0;
    rep.verdicts.push_back({"f(0) tends to 1", mono && R.back().f0 >= opt.final_f0, s.str()});
  }
  auto spread = [&](auto get) -> double {
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : R) {
      double v = get(r);
      if (!std::isfinite(v)) return INFINITY;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return lo > 0.0 ? hi / lo : INFINITY;
  };
  {
    double sp = spread([](const CampaignRecord& r) { return r.norm_alpha; });
    s.str("");
    s << "max/min of |f(0)|^2 + D_alpha(f) = " << sp << ", limit " << opt.norm_spread;
    rep.verdicts.push_back({"norms stay bounded", sp <= opt.norm_spread, s.str()});
  }
  {
    double sp = spread([](const CampaignRecord& r) { return r.fw_ratio; });
    s.str("");
    s << "max/min of D_alpha(f) / bound integral = " << sp << ", limit " << opt.fw_spread;
    rep.verdicts.push_back({"bound ratio stays bounded", sp <= opt.fw_spread, s.str()});
  }
  s.str("");
  s << "psi/t^rho nondecreasing " << rep.envelope.ratio_nondecreasing << ", phi <= psi " << rep.envelope.dominates_phi
    << ", psi <= t^sigma on (0,1] " << rep.envelope.below_t_sigma << " on " << rep.envelope.nodes << " nodes";
  rep.verdicts.push_back({"envelope conclusions", rep.envelope.passed(), s.str()});
  rep.verdicts.push_back({"envelope integral diverges", rep.divergence.verdict == LadderVerdict::divergent,
                          rep.divergence.reason});
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

const char* to_string(NecessaryVerdict v) {
  switch (v) {
    case NecessaryVerdict::trivially_passes: return "trivially passes";
    case NecessaryVerdict::not_cyclic: return "not cyclic";
    case NecessaryVerdict::growing: return "growing";
    case NecessaryVerdict::saturating: return "saturating";
    default: return "inconclusive";
  }
}

NecessaryConditionReport necessary_condition_check(const BoundaryModulus& modulus, double alpha, double threshold,
                                                   const NecessaryConditionOptions& opt) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
  if (!(threshold > 0.0 && std::isfinite(threshold))) throw InvalidArgument("threshold must be positive");
  if (opt.rungs < 2 || opt.max_support < 2) {
    throw InvalidArgument("bad sublevel ladder options");
  }
  const auto& v = modulus.logmod();
  const std::size_t n = v.size();
  const double h = kTwoPi / static_cast<double>(n);
  NecessaryConditionReport rep;

  std::size_t first_finite = 0;
  while (first_finite < n && std::isinf(v[first_finite])) ++first_finite;
  int run = 0, longest = first_finite == n ? static_cast<int>(n) : 0;
  for (std::size_t i = 1; i <= n && first_finite < n; ++i) {
    run = std::isinf(v[(first_finite + i) % n]) ? run + 1 : 0;
    longest = std::max(longest, run);
  }
  if (longest >= opt.max_zero_run) {
    rep.verdict = NecessaryVerdict::not_cyclic;
    rep.reason = "|f*| vanishes on " + std::to_string(longest) + " consecutive samples: zero set of positive measure";
    return rep;
  }

  const double top = std::log(threshold);
  auto sublevel = [&](double level) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < n; ++k) {
      if (v[k] < level) idx.push_back(k);
    }
    return idx;
  };
  if (sublevel(top).empty()) {
    rep.verdict = NecessaryVerdict::trivially_passes;
    rep.reason = "|f*| >= threshold on the whole grid: empty zero set";
    return rep;
  }
  double bottom = top;
  for (double x : v) {
    if (std::isfinite(x)) bottom = std::min(bottom, x);
  }

  std::vector<double> measures, energies;
  std::vector<std::size_t> previous;
  int unchanged = 0;
  for (int j = 0; j < opt.rungs; ++j) {
    // Geometric in |f*| from the threshold down to the smallest finite sample.
    double level = top + (bottom - top) * j / opt.rungs;
    std::vector<std::size_t> idx = sublevel(level);
    if (idx == previous) {
      if (++unchanged >= opt.window) break;
      continue;
    }
    unchanged = 0;
    // Stop once the set is no longer resolved: components of under two cells on average.
    std::size_t components = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      std::size_t prev = idx[(i + idx.size() - 1) % idx.size()];
      if (idx.size() == n || (prev + 1) % n != idx[i]) ++components;
    }
    if (idx.size() < 2 * std::max<std::size_t>(components, 1)) {
      if (rep.rungs.empty()) rep.reason = "sublevel set below grid resolution";
      break;
    }
    previous = idx;
    std::size_t stride = (idx.size() + opt.max_support - 1) / opt.max_support;
    std::vector<double> angles;
    for (std::size_t i = 0; i < idx.size(); i += stride) angles.push_back(modulus.grid().angle(idx[i]));
    SublevelRung r{std::exp(level), static_cast<double>(idx.size()) * h, idx.size(), angles.size(), 0.0};
    std::vector<double> smear = nearest_neighbor_smear(angles);
    for (double& s : smear) s = std::min(s, 0.5 * h * static_cast<double>(stride));
    SolverParams sp;
    sp.record_trace = false;
    r.energy = minimize_on_simplex(kernel_matrix(angles, smear, alpha), angles.size(), sp).energy;
    rep.rungs.push_back(r);
    measures.push_back(r.measure);
    energies.push_back(r.energy);
  }
  if (rep.rungs.empty()) return rep;
  if (unchanged >= opt.window) {
    rep.verdict = NecessaryVerdict::saturating;
    rep.reason = "sublevel sets stop shrinking at grid measure " + std::to_string(measures.back()) +
                 "; positive capacity of the zero set rules out cyclicity";
    return rep;
  }
  rep.ladder = classify_ladder(measures, energies, opt.slope_threshold, opt.window);
  rep.reason = rep.ladder.reason;
  if (rep.ladder.verdict == LadderVerdict::divergent) rep.verdict = NecessaryVerdict::growing;
  if (rep.ladder.verdict == LadderVerdict::convergent) {
    rep.verdict = NecessaryVerdict::saturating;
    rep.reason += "; positive capacity of the zero set rules out cyclicity";
  }
  return rep;
}

}  // namespace dirlab
