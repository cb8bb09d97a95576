#include "dirlab/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dirlab {

CantorSpec CantorSpec::geometric(double a0, double ratio, int depth) {
  if (depth < 0) throw InvalidArgument("depth must be nonnegative");
  CantorSpec s{a0, std::vector<double>(depth, ratio)};
  s.validate();
  return s;
}

CantorSpec CantorSpec::from_lengths(const std::vector<double>& lengths) {
  if (lengths.empty()) throw InvalidArgument("Cantor spec needs at least a_0");
  CantorSpec s{lengths[0], {}};
  for (std::size_t i = 1; i < lengths.size(); ++i) s.ratios.push_back(lengths[i] / lengths[i - 1]);
  s.validate();
  return s;
}

std::vector<double> CantorSpec::lengths() const {
  std::vector<double> a{a0};
  for (double r : ratios) a.push_back(a.back() * r);
  return a;
}

double CantorSpec::length(int n) const {
  if (n < 0 || n > depth()) throw OutOfRange("level " + std::to_string(n) + " outside spec depth");
  double a = a0;
  for (int k = 0; k < n; ++k) a *= ratios[k];
  return a;
}

void CantorSpec::validate() const {
  if (!(a0 > 0.0) || a0 > kTwoPi) throw InvalidArgument("a0 must lie in (0, 2pi]");
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    double r = ratios[k];
    if (!(r > 0.0)) throw InvalidArgument("Cantor lengths must be positive");
    if (!(r < 0.5)) {
      throw InvalidArgument("ratio a_" + std::to_string(k + 1) + "/a_" + std::to_string(k) + " = " +
                            std::to_string(r) + " is not below 1/2");
    }
  }
}

LambdaMu lambda_and_mu(const CantorSpec& spec) {
  spec.validate();
  if (spec.ratios.empty()) throw InvalidArgument("lambda needs at least one ratio");
  double lam = *std::max_element(spec.ratios.begin(), spec.ratios.end());
  return {lam, 1.0 - std::log(2.0) / std::log(1.0 / lam)};
}

double NeighborhoodProfile::value(double t) const {
  std::size_t j = piece(t);
  return std::min(intercept[j] + slope[j] * t, kTwoPi);
}

std::size_t NeighborhoodProfile::piece(double t) const {
  auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
  return it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
}

CantorLevel::CantorLevel(CantorSpec spec, int level) : spec_(std::move(spec)), level_(level) {
  spec_.validate();
  if (level < 0 || level > spec_.depth()) {
    throw OutOfRange("level " + std::to_string(level) + " exceeds depth " +
                     std::to_string(spec_.depth()));
  }
  if (level > 62) throw OutOfRange("levels above 62 are not supported");
  lengths_ = spec_.lengths();
  lengths_.resize(level + 1);
}

double CantorLevel::measure() const { return std::ldexp(arc_length(), level_); }

Arc CantorLevel::arc(std::uint64_t index) const {
  if (index >= arc_count()) throw OutOfRange("arc index out of range");
  double left = -0.5 * lengths_[0];
  for (int k = 1; k <= level_; ++k) {
    if ((index >> (level_ - k)) & 1) left += lengths_[k - 1] - lengths_[k];
  }
  return Arc(left, arc_length());
}

std::vector<Arc> CantorLevel::arcs() const {
  if (level_ > 22) throw OutOfRange("refusing to materialise more than 2^22 arcs");
  std::vector<Arc> out;
  out.reserve(arc_count());
  for (std::uint64_t i = 0; i < arc_count(); ++i) out.push_back(arc(i));
  return out;
}

double CantorLevel::distance(double theta) const {
  double x = wrap_angle(theta + kPi) - kPi;
  double lo = -0.5 * lengths_[0];
  if (x < lo) return lo - x;
  if (x > -lo) return x + lo;
  for (int k = 1; k <= level_; ++k) {
    double a = lengths_[k - 1], b = lengths_[k];
    if (x <= lo + b) continue;
    if (x >= lo + a - b) {
      lo += a - b;
      continue;
    }
    return std::min(x - (lo + b), (lo + a - b) - x);
  }
  return 0.0;
}

std::vector<GapClass> CantorLevel::gap_classes() const {
  std::vector<GapClass> out;
  if (lengths_[0] < kTwoPi) out.push_back({0, kTwoPi - lengths_[0], 1});
  for (int k = 1; k <= level_; ++k) {
    out.push_back({k, lengths_[k - 1] - 2.0 * lengths_[k], std::uint64_t{1} << (k - 1)});
  }
  return out;
}

double CantorLevel::neighborhood_measure(double t) const {
  if (t < 0.0) throw InvalidArgument("t must be nonnegative");
  double m = measure();
  for (const GapClass& g : gap_classes()) m += static_cast<double>(g.count) * std::min(g.length, 2.0 * t);
  return std::min(m, kTwoPi);
}

std::uint64_t CantorLevel::counting_function(double t) const {
  std::uint64_t n = 0;
  for (const GapClass& g : gap_classes()) {
    if (g.length > 2.0 * t) n += 2 * g.count;
  }
  return n;
}

NeighborhoodProfile CantorLevel::profile() const {
  auto gaps = gap_classes();
  std::sort(gaps.begin(), gaps.end(),
            [](const GapClass& a, const GapClass& b) { return a.length < b.length; });
  NeighborhoodProfile p;
  double a = measure(), b = 0.0;
  for (const GapClass& g : gaps) b += 2.0 * static_cast<double>(g.count);
  p.breaks.push_back(0.0);
  p.intercept.push_back(a);
  p.slope.push_back(b);
  for (const GapClass& g : gaps) {
    double c = static_cast<double>(g.count);
    a += c * g.length;
    b -= 2.0 * c;
    double t = 0.5 * g.length;
    if (t == p.breaks.back()) {
      p.intercept.back() = a;
      p.slope.back() = b;
    } else {
      p.breaks.push_back(t);
      p.intercept.push_back(a);
      p.slope.push_back(b);
    }
  }
  return p;
}

namespace {

double tent_partial(double u, double g, double alpha) {
  double e = alpha + 1.0;
  if (u <= 0.5 * g) return std::pow(u, e) / e;
  return 2.0 * std::pow(0.5 * g, e) / e - std::pow(std::max(g - u, 0.0), e) / e;
}

}  // namespace

double CantorLevel::arc_self_integral(int k, double alpha) const {
  double s = 0.0;
  for (int j = level_; j > k; --j) {
    double g = lengths_[j - 1] - 2.0 * lengths_[j];
    s = 2.0 * s + tent_partial(g, g, alpha);
  }
  return s;
}

double CantorLevel::cumulative_distance_power(double x, double alpha) const {
  double e = alpha + 1.0;
  double half = 0.5 * lengths_[0];
  double outer = std::pow(kPi - half, e) / e;
  if (x <= -half) return outer - std::pow(std::max(-half - x, 0.0), e) / e;
  if (x >= half) return outer + arc_self_integral(0, alpha) + std::pow(x - half, e) / e;
  double acc = outer;
  double lo = -half;
  for (int k = 1; k <= level_; ++k) {
    double a = lengths_[k - 1], b = lengths_[k], g = a - 2.0 * b;
    if (x <= lo + b) continue;
    double child = arc_self_integral(k, alpha);
    if (x < lo + a - b) return acc + child + tent_partial(x - (lo + b), g, alpha);
    acc += child + tent_partial(g, g, alpha);
    lo += a - b;
  }
  return acc;
}

double CantorLevel::integrate_distance_power(const Arc& arc, double alpha) const {
  if (alpha < 0.0) throw InvalidArgument("alpha must be nonnegative");
  double total = cumulative_distance_power(kPi, alpha);
  if (arc.is_full()) return total;
  double x0 = wrap_angle(arc.start() + kPi) - kPi;
  double x1 = x0 + arc.length();
  double lo = cumulative_distance_power(x0, alpha);
  if (x1 <= kPi) return cumulative_distance_power(x1, alpha) - lo;
  return total - lo + cumulative_distance_power(x1 - kTwoPi, alpha);
}

CantorLevel build_level(const CantorSpec& spec, int n) { return CantorLevel(spec, n); }
double distance_to_set(double theta, const CantorLevel& level) { return level.distance(theta); }
double neighborhood_measure(const CantorLevel& level, double t) { return level.neighborhood_measure(t); }
std::uint64_t counting_function(const CantorLevel& level, double t) { return level.counting_function(t); }

double measure_exponent_fit(const CantorLevel& level, double t_lo, double t_hi, int samples) {
  if (!(t_lo > 0.0 && t_hi > t_lo) || samples < 2) throw InvalidArgument("bad fit range");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    double lt = std::log(t_lo) + (std::log(t_hi) - std::log(t_lo)) * i / (samples - 1);
    double ly = std::log(level.neighborhood_measure(std::exp(lt)));
    sx += lt;
    sy += ly;
    sxx += lt * lt;
    sxy += lt * ly;
  }
  return (samples * sxy - sx * sy) / (samples * sxx - sx * sx);
}

double measure_growth_constant(const CantorSpec& spec) {
  LambdaMu lm = lambda_and_mu(spec);
  return 3.0 * std::pow(spec.a0, std::log(2.0) / std::log(1.0 / lm.lambda));
}

double kset_constant(double alpha, double lambda) {
  return std::pow(std::min(0.5 - lambda, 0.25), alpha + 1.0) / (alpha + 1.0);
}

KsetAudit kset_lower_bound_audit(const CantorLevel& level, double alpha, int trials,
                                 std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0,1)");
  double lam = level.spec().ratios.empty() ? 0.0 : lambda_and_mu(level.spec()).lambda;
  KsetAudit audit{std::numeric_limits<double>::infinity(), Arc::full_circle(),
                  kset_constant(alpha, lam)};
  auto check = [&](const Arc& I) {
    double r = level.integrate_distance_power(I, alpha) / std::pow(I.length(), 1.0 + alpha);
    ++audit.arcs_checked;
    if (r < audit.worst_ratio) {
      audit.worst_ratio = r;
      audit.worst_arc = I;
    }
  };
  check(Arc::full_circle());
  for (int k = 0; k < level.level(); ++k) {
    CantorLevel coarse(level.spec(), k);
    std::uint64_t stride = std::max<std::uint64_t>(1, coarse.arc_count() / 64);
    for (std::uint64_t i = 0; i < coarse.arc_count(); i += stride) check(coarse.arc(i));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double lmin = std::log(std::min(2.0 * level.arc_length(), kTwoPi)), lmax = std::log(kTwoPi);
  for (int i = 0; i < trials; ++i) {
    double start = kTwoPi * unit(rng);
    double len = std::exp(lmin + (lmax - lmin) * unit(rng));
    check(Arc(start, std::min(len, kTwoPi)));
  }
  return audit;
}

double carleson_integral(const CantorLevel& level) {
  NeighborhoodProfile p = level.profile();
  double lo = 0.5 * level.arc_length();
  double total = 0.0;
  for (std::size_t j = 0; j < p.breaks.size(); ++j) {
    double a = std::max(lo, p.breaks[j]);
    double b = j + 1 < p.breaks.size() ? std::min(kPi, p.breaks[j + 1]) : kPi;
    if (b <= a) continue;
    total += p.intercept[j] * std::log(b / a) + p.slope[j] * (b - a);
  }
  return total;
}

}  // namespace dirlab
