#include "dirlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "dirlab/capacity.hpp"
#include "dirlab/cyclicity.hpp"
#include "dirlab/dirichlet.hpp"
#include "dirlab/io.hpp"
#include "dirlab/outer.hpp"
#include "dirlab/parallel.hpp"

namespace dirlab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::vector<double> alphas;
  std::optional<int> depth;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

struct Settings {
  json cfg = json::object();
  CantorSpec spec;
  std::vector<double> alphas;
  int depth = 0;
  std::size_t n = 0;
  int angular_factor = 2;
  fs::path out;
  std::uint64_t seed = 1;
  double tolerance = 1e-3;
};

struct Defaults {
  int depth;
  std::size_t n;
  std::vector<double> alphas;
};

// An I/O failure, mapped to exit code 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json section(const json& cfg, const char* name) {
  if (!cfg.contains(name)) return json::object();
  if (!cfg.at(name).is_object()) throw InvalidArgument(std::string("config field \"") + name + "\" must be an object");
  return cfg.at(name);
}

Settings resolve(const Flags& flags, const Defaults& d) {
  Settings s;
  if (!flags.config.empty()) {
    std::ifstream f(flags.config);
    if (!f) throw InvalidArgument("cannot read config " + flags.config);
    try {
      s.cfg = json::parse(f);
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!s.cfg.is_object()) throw InvalidArgument("config must be a JSON object");
    int version = s.cfg.value("schema_version", -1);
    if (version != kConfigSchemaVersion) {
      throw InvalidArgument("config schema_version must be " + std::to_string(kConfigSchemaVersion));
    }
  }
  json res = section(s.cfg, "resolution");
  json set = s.cfg.contains("set") ? s.cfg.at("set") : json::object();
  if (!set.is_object()) throw InvalidArgument("config field \"set\" must be an object");

  if (flags.depth) {
    s.depth = *flags.depth;
  } else if (res.contains("depth")) {
    s.depth = res.at("depth").get<int>();
  } else if (set.contains("ratios")) {
    s.depth = static_cast<int>(set.at("ratios").size());
  } else if (set.contains("depth")) {
    s.depth = set.at("depth").get<int>();
  } else {
    s.depth = d.depth;
  }
  if (s.depth < 0 || s.depth > 60) throw InvalidArgument("depth must lie in [0, 60]");

  if (set.empty()) {
    s.spec = CantorSpec::middle_thirds(s.depth);
  } else {
    if (set.contains("ratio") && !set.contains("ratios")) set["depth"] = std::max(s.depth, set.value("depth", 0));
    s.spec = cantor_spec_from_json(set);
    if (s.spec.depth() < s.depth) {
      throw InvalidArgument("set has " + std::to_string(s.spec.depth()) + " ratios, fewer than depth " +
                            std::to_string(s.depth));
    }
  }
  s.spec.validate();

  if (!flags.alphas.empty()) {
    s.alphas = flags.alphas;
  } else if (s.cfg.contains("alpha")) {
    const json& a = s.cfg.at("alpha");
    s.alphas = a.is_array() ? a.get<std::vector<double>>() : std::vector<double>{a.get<double>()};
  } else {
    s.alphas = d.alphas;
  }
  if (s.alphas.empty()) throw InvalidArgument("no alpha given");
  for (double a : s.alphas) {
    if (!(a >= 0.0 && a < 1.0)) throw InvalidArgument("alpha must lie in [0, 1), got " + format_number(a));
  }

  s.n = res.value("circle_n", d.n);
  if (s.n < 64 || s.n % 2 != 0) throw InvalidArgument("resolution.circle_n must be even and >= 64");
  s.angular_factor = res.value("disk_angular_factor", 2);
  if (s.angular_factor < 1) throw InvalidArgument("resolution.disk_angular_factor must be positive");
  s.out = !flags.out.empty() ? flags.out : s.cfg.value("out", std::string("dirlab_out"));
  s.seed = flags.seed ? *flags.seed : s.cfg.value("seed", std::uint64_t{1});
  s.tolerance = flags.tolerance ? *flags.tolerance : s.cfg.value("tolerance", 1e-3);
  if (!(s.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  return s;
}

json metadata(const Settings& s, const char* command) {
  DiskGridParams disk = disk_params_for(s.n, s.angular_factor);
  return {{"schema_version", kConfigSchemaVersion},
          {"command", command},
          {"set", to_json(s.spec)},
          {"alpha", s.alphas},
          {"seed", s.seed},
          {"tolerance", s.tolerance},
          {"threads", worker_count()},
          {"resolution",
           {{"depth", s.depth},
            {"circle_n", s.n},
            {"disk", {{"boundary_layers", disk.boundary_layers},
                      {"grading", disk.grading},
                      {"points_per_panel", disk.points_per_panel},
                      {"max_angular", disk.max_angular}}}}}};
}

void prepare_out(const Settings& s) {
  try {
    ensure_writable_dir(s.out);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

void emit(const fs::path& path, const std::string& content) {
  try {
    write_file(path, content);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

json ladder_json(const LadderClassification& l) {
  json rungs = json::array();
  for (const auto& r : l.rungs) {
    rungs.push_back({{"epsilon", r.epsilon}, {"integral", r.integral},
                     {"slope", std::isfinite(r.slope) ? json(r.slope) : json(nullptr)}});
  }
  return {{"verdict", to_string(l.verdict)}, {"reason", l.reason}, {"rungs", rungs}};
}

int cmd_cantor(const Settings& s, std::ostream& out) {
  prepare_out(s);
  CantorLevel level = build_level(s.spec, s.depth);
  int queries = section(s.cfg, "cantor").value("queries", 200);
  if (queries < 2) throw InvalidArgument("cantor.queries must be at least 2");
  double t_lo = 0.5 * level.arc_length();
  CsvWriter csv({"t", "measure", "counting"});
  for (int i = 0; i < queries; ++i) {
    double t = t_lo * std::pow(kPi / t_lo, static_cast<double>(i) / (queries - 1));
    csv.row(std::vector<double>{t, level.neighborhood_measure(t), static_cast<double>(level.counting_function(t))});
  }
  emit(s.out / "cantor.csv", csv.str());

  json j = metadata(s, "cantor");
  j["measure"] = level.measure();
  j["carleson_integral"] = carleson_integral(level);
  if (s.spec.depth() > 0) {
    auto lm = lambda_and_mu(s.spec);
    j["lambda"] = lm.lambda;
    j["mu"] = lm.mu;
    j["measure_growth_constant"] = measure_growth_constant(s.spec);
  }
  if (s.depth >= 2) j["mu_fit"] = measure_exponent_fit(level, level.arc_length(), s.spec.length(1));
  j["csv"] = "cantor.csv";
  emit(s.out / "cantor.json", j.dump(2) + "\n");
  out << "cantor: depth " << s.depth << ", |E_N| = " << level.measure() << ", Carleson integral "
      << j["carleson_integral"].get<double>() << "\n";
  return kExitOk;
}

int cmd_capacity(const Settings& s, std::ostream& out) {
  json sec = section(s.cfg, "capacity");
  std::string mode = sec.value("mode", std::string("criterion"));
  if (mode != "criterion" && mode != "equilibrium") throw InvalidArgument("capacity.mode must be criterion or equilibrium");
  prepare_out(s);
  json j = metadata(s, "capacity");
  j["mode"] = mode;
  json results = json::array();
  if (mode == "criterion") {
    CsvWriter csv({"alpha", "epsilon", "integral", "slope"});
    CapacityTestParams p;
    p.depth = s.depth;
    p.slope_threshold = sec.value("slope_threshold", p.slope_threshold);
    p.window = sec.value("window", p.window);
    for (double a : s.alphas) {
      auto rep = cantor_capacity_zero_test(s.spec, a, p);
      for (const auto& r : rep.ladder.rungs) csv.row(std::vector<double>{a, r.epsilon, r.integral, r.slope});
      results.push_back({{"alpha", a}, {"verdict", to_string(rep.verdict)}, {"ladder", ladder_json(rep.ladder)}});
      out << "capacity: alpha " << a << " -> " << to_string(rep.verdict) << "\n";
    }
    emit(s.out / "capacity.csv", csv.str());
    j["csv"] = "capacity.csv";
  } else {
    int support_level = std::min(s.depth, sec.value("support_level", 8));
    if (support_level < 1) throw InvalidArgument("equilibrium needs depth >= 1");
    CantorLevel level = build_level(s.spec, support_level);
    std::vector<double> support;
    for (const Arc& arc : level.arcs()) support.push_back(arc.midpoint());
    CsvWriter csv({"alpha", "angle", "weight"});
    for (double a : s.alphas) {
      auto eq = equilibrium_measure(support, a);
      for (std::size_t i = 0; i < support.size(); ++i) {
        csv.row(std::vector<double>{a, eq.measure.angles[i], eq.measure.weights[i]});
      }
      results.push_back({{"alpha", a},
                         {"energy", eq.energy()},
                         {"capacity", eq.capacity()},
                         {"duality_gap", eq.solver.duality_gap},
                         {"iterations", eq.solver.iterations},
                         {"converged", eq.solver.converged}});
      out << "capacity: alpha " << a << " equilibrium energy " << eq.energy() << "\n";
    }
    j["support_level"] = support_level;
    j["support_points"] = support.size();
    emit(s.out / "equilibrium.csv", csv.str());
    j["csv"] = "equilibrium.csv";
  }
  j["results"] = results;
  emit(s.out / "capacity.json", j.dump(2) + "\n");
  return kExitOk;
}

struct OuterSource {
  BoundaryModulus raw;  // -infinity on the zero set
  std::function<OuterFunction()> synthesize;
};

OuterSource outer_source(const Settings& s, json& j) {
  json sec = section(s.cfg, "outer");
  if (sec.contains("modulus_csv")) {
    BoundaryModulus m = read_modulus_csv(sec.at("modulus_csv").get<std::string>());
    j["source"] = {{"modulus_csv", sec.at("modulus_csv")}};
    return {m, [m] { return OuterFunction(m, {Arc::full_circle()}); }};
  }
  double beta = sec.value("weight_power", 4.0);
  CantorLevel level = build_level(s.spec, s.depth);
  BoundaryModulus m = BoundaryModulus::sample(s.n, [&](double t) {
    double d = level.distance(t);
    return d > 0.0 ? beta * std::log(d) : -INFINITY;
  });
  j["source"] = {{"weight_power", beta}};
  return {m, [&s, beta, level] { return outer_from_weight(WeightProfile::power(beta), level, s.n); }};
}

int cmd_outer(const Settings& s, std::ostream& out) {
  prepare_out(s);
  json j = metadata(s, "outer");
  OuterSource src = outer_source(s, j);
  j["resolution"]["circle_n"] = src.raw.grid().size();

  json zero_sets = json::array();
  bool positive_measure = false;
  double threshold = section(s.cfg, "outer").value("threshold", 0.1);
  for (double a : s.alphas) {
    auto rep = necessary_condition_check(src.raw, a, threshold);
    positive_measure = positive_measure || rep.verdict == NecessaryVerdict::not_cyclic;
    json rungs = json::array();
    for (const auto& r : rep.rungs) {
      rungs.push_back({{"threshold", r.threshold}, {"measure", r.measure}, {"support", r.support}, {"energy", r.energy}});
    }
    zero_sets.push_back({{"alpha", a}, {"verdict", to_string(rep.verdict)}, {"reason", rep.reason}, {"rungs", rungs}});
    out << "outer: alpha " << a << " zero-set diagnostic: " << to_string(rep.verdict) << "\n";
  }
  j["zero_set"] = zero_sets;
  if (positive_measure) {
    j["outer"] = nullptr;
    emit(s.out / "outer.json", j.dump(2) + "\n");
    out << "outer: the modulus vanishes on a set of positive measure; no outer function\n";
    return kExitFailed;
  }

  OuterFunction f = src.synthesize();
  emit(s.out / "outer_modulus.csv", [&] {
    CsvWriter csv({"theta", "logmod"});
    for (std::size_t k = 0; k < f.grid().size(); ++k) csv.row(std::vector<double>{f.grid().angle(k), f.logmod()[k]});
    return csv.str();
  }());
  const ClipReport& clip = f.clip_report();
  json o;
  o["f0"] = {{"re", f.value_at_zero().real()}, {"im", f.value_at_zero().imag()}};
  o["clip"] = {{"policy", clip.policy}, {"floor", clip.floor}, {"infinite", clip.infinite},
               {"raised", clip.raised}, {"bias", clip.bias}};
  o["margin"] = f.margin();
  json taylor = json::array();
  for (Complex c : f.taylor_coefficients(8, static_cast<int>(std::max<std::size_t>(64, f.grid().size()))))
    taylor.push_back({c.real(), c.imag()});
  o["taylor"] = taylor;

  OuterFunction g(normalized(BoundaryModulus(f.grid(), f.logmod())), {Arc::full_circle()});
  DiskGrid disk(disk_params_for(f.grid().size(), s.angular_factor));
  json audits = json::array();
  bool ok = true;
  const double slack = section(s.cfg, "outer").value("derivative_slack", 1e-2);
  const std::vector<std::pair<std::string, std::vector<Arc>>> sets{
      {"circle", {Arc::full_circle()}}, {"half circle", {Arc(0.0, kPi)}}, {"empty", {}}};
  for (const auto& [name, gamma] : sets) {
    auto a = korenblum_audit(g, gamma, disk);
    bool pass = a.passed(slack);
    ok = ok && pass;
    audits.push_back({{"gamma", name}, {"max_ratio", a.max_ratio}, {"points", a.points}, {"passed", pass}});
  }
  o["derivative_bound"] = audits;
  o["csv"] = "outer_modulus.csv";
  j["outer"] = o;
  emit(s.out / "outer.json", j.dump(2) + "\n");
  out << "outer: |f(0)| = " << std::abs(f.value_at_zero()) << ", derivative bound " << (ok ? "holds" : "FAILS") << "\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_dirichlet_audit(const Settings& s, std::ostream& out) {
  prepare_out(s);
  CantorLevel level = build_level(s.spec, s.depth);
  const std::size_t n = s.n;
  std::vector<std::pair<std::string, OuterFunction>> corpus;
  corpus.emplace_back("1-z", OuterFunction(BoundaryModulus::sample(n, [](double t) {
                                             return std::log(std::abs(1.0 - std::polar(1.0, t)));
                                           }),
                                           {Arc::full_circle()}));
  for (double beta : {1.0, 2.0, 4.0}) {
    corpus.emplace_back("d^" + format_number(beta), outer_from_weight(WeightProfile::power(beta), level, n));
  }

  CsvWriter csv({"case", "check", "alpha", "lhs", "rhs", "ratio", "status", "n", "depth"});
  json rows = json::array();
  bool ok = true;
  auto record = [&](const std::string& name, const std::string& check, double alpha, double lhs, double rhs,
                    double ratio, const std::string& status) {
    csv.row(std::vector<std::string>{name, check, format_number(alpha), format_number(lhs), format_number(rhs),
                                     format_number(ratio), status, std::to_string(n), std::to_string(s.depth)});
    rows.push_back({{"case", name}, {"check", check}, {"alpha", alpha}, {"lhs", lhs}, {"rhs", rhs},
                    {"ratio", ratio}, {"status", status}});
    if (status == "fail") ok = false;
  };

  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  int points = section(s.cfg, "dirichlet").value("boundary_points", 8);
  for (const auto& [name, f] : corpus) {
    std::vector<double> zetas;
    while (static_cast<int>(zetas.size()) < points) {
      double z = u(rng);
      try {
        local_dirichlet(f, z, LocalMethod::boundary);
        zetas.push_back(z);
      } catch (const InvalidArgument&) {
      }
    }
    auto area = local_dirichlet(f, zetas, LocalMethod::area);
    auto bnd = local_dirichlet(f, zetas, LocalMethod::boundary);
    for (std::size_t i = 0; i < zetas.size(); ++i) {
      double rel = std::abs(area[i] - bnd[i]) / std::max(area[i], 1e-12);
      record(name, "local zeta=" + format_number(zetas[i]), 0.0, area[i], bnd[i], rel,
             rel <= s.tolerance ? "pass" : "fail");
    }
  }

  double lambda = s.spec.depth() > 0 ? lambda_and_mu(s.spec).lambda : 0.0;
  for (double a : s.alphas) {
    BoundaryWeight h = distance_power_weight(level, a, 1.0 / kset_constant(a, lambda));
    CarlesonOptions co;
    co.tolerance = s.tolerance;
    co.angular_factor = s.angular_factor;
    for (const auto& [name, f] : corpus) {
      try {
        auto c = carleson_substitute_audit(f, h, a, co);
        record(name, "carleson", a, c.lhs, c.rhs, c.ratio, c.passed() ? "pass" : "fail");
      } catch (const AuditRefused& e) {
        record(name, "carleson", a, NAN, NAN, NAN, "fail");
        out << "dirichlet-audit: " << e.what() << "\n";
      }
    }
    if (a > 0.0 && s.spec.depth() > 0) {
      // Midpoint of the exponents for which t^beta passes the concavity gate with a finite bound.
      double beta = (1.0 - a) / 2.0 - lambda_and_mu(s.spec).mu / 4.0;
      if (beta > 0.0) {
        FwOptions fo;
        fo.n = n;
        fo.angular_factor = s.angular_factor;
        std::string name = "d^" + format_number(beta);
        try {
          auto fw = fw_estimate_audit(WeightProfile::power(beta), level, a, fo);
          record(name, "fw", a, fw.lhs, fw.rhs, fw.ratio, std::isfinite(fw.ratio) ? "pass" : "fail");
        } catch (const AuditRefused&) {
          record(name, "fw", a, NAN, NAN, NAN, "refused");
        }
      }
    }
  }
  emit(s.out / "dirichlet_audit.csv", csv.str());
  json j = metadata(s, "dirichlet-audit");
  j["rows"] = rows;
  j["passed"] = ok;
  j["csv"] = "dirichlet_audit.csv";
  emit(s.out / "dirichlet_audit.json", j.dump(2) + "\n");
  out << "dirichlet-audit: " << rows.size() << " checks, " << (ok ? "all pass" : "FAILURES") << "\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_cyclicity(const Settings& s, std::ostream& out, std::ostream& err) {
  json sec = section(s.cfg, "cyclicity");
  CampaignOptions opt;
  opt.depth = s.depth;
  opt.n = s.n;
  opt.angular_factor = s.angular_factor;
  if (s.cfg.contains("deltas")) {
    const json& d = s.cfg.at("deltas");
    if (d.is_array()) {
      opt.deltas = d.get<std::vector<double>>();
    } else if (d.is_object()) {
      for (int k = d.value("k_first", 3); k <= d.value("k_last", 12); ++k) opt.deltas.push_back(std::ldexp(kPi, -k));
    } else {
      throw InvalidArgument("deltas must be an array or {k_first, k_last}");
    }
  }
  opt.offset_eps = sec.value("offset_eps", opt.offset_eps);
  opt.offset_shrink = sec.value("offset_shrink", opt.offset_shrink);
  opt.final_f0 = sec.value("final_f0", opt.final_f0);
  opt.norm_spread = sec.value("norm_spread", opt.norm_spread);
  opt.fw_spread = sec.value("fw_spread", opt.fw_spread);
  prepare_out(s);

  json j = metadata(s, "cyclicity");
  json campaigns = json::array();
  CsvWriter csv({"alpha", "delta", "A_delta", "eta_delta", "f0", "norm_alpha", "dirichlet", "fw_bound", "fw_ratio",
                 "offset_fraction", "concavity_ok"});
  bool refused = false, failed = false;
  for (double a : s.alphas) {
    opt.alpha = a;
    try {
      if (!(a > 0.0)) throw InvalidArgument("the campaign needs alpha in (0, 1)");
      CampaignReport rep = cyclicity_run(s.spec, opt);
      json records = json::array();
      for (const auto& r : rep.records) {
        csv.row(std::vector<double>{a, r.delta, r.A_delta, r.eta_delta, r.f0, r.norm_alpha, r.dirichlet, r.fw_bound,
                                    r.fw_ratio, r.offset_fraction, r.concavity_ok ? 1.0 : 0.0});
        records.push_back({{"delta", r.delta}, {"A_delta", r.A_delta}, {"eta_delta", r.eta_delta}, {"f0", r.f0},
                           {"norm_alpha", r.norm_alpha}, {"dirichlet", r.dirichlet}, {"fw_bound", r.fw_bound},
                           {"fw_ratio", r.fw_ratio}, {"offset_fraction", r.offset_fraction},
                           {"concavity_ok", r.concavity_ok}});
      }
      json verdicts = json::array();
      for (const auto& v : rep.verdicts) {
        verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
        out << "cyclicity: alpha " << a << " " << v.name << ": " << (v.passed ? "pass" : "FAIL") << " (" << v.detail
            << ")\n";
      }
      campaigns.push_back({{"alpha", a},
                           {"capacity", ladder_json(rep.capacity.ladder)},
                           {"mu", rep.mu},
                           {"rho", rep.params.rho},
                           {"sigma", rep.params.sigma},
                           {"psi_divergence", ladder_json(rep.divergence)},
                           {"records", records},
                           {"verdicts", verdicts},
                           {"passed", rep.passed()},
                           {"seconds", rep.seconds}});
      failed = failed || !rep.passed();
    } catch (const AuditRefused& e) {
      refused = true;
      campaigns.push_back({{"alpha", a}, {"refused", e.what()}});
      err << "cyclicity: alpha " << a << " refused: " << e.what() << "\n";
    }
  }
  j["campaigns"] = campaigns;
  j["csv"] = "cyclicity.csv";
  emit(s.out / "cyclicity.csv", csv.str());
  emit(s.out / "cyclicity.json", j.dump(2) + "\n");
  if (refused) return kExitHypothesis;
  return failed ? kExitFailed : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for weighted Dirichlet spaces", "dirlab"};
  app.require_subcommand(1);
  struct Sub {
    const char* name;
    const char* help;
    Defaults defaults;
  };
  const std::vector<Sub> subs{
      {"cantor", "neighbourhood measure and counting function of a Cantor set", {12, 4096, {0.5}}},
      {"capacity", "alpha-capacity by the integral test or an equilibrium measure", {20, 4096, {0.5}}},
      {"outer", "outer function from a boundary modulus, with derivative and zero-set audits", {8, 4096, {0.7}}},
      {"dirichlet-audit", "local Dirichlet identity and Dirichlet-integral bounds on a test corpus", {8, 4096, {0.5}}},
      {"cyclicity", "w_delta campaign for a set of alpha-capacity zero", {20, 16384, {0.7}}},
  };
  Flags flags;
  std::vector<CLI::App*> cmds;
  for (const auto& sub : subs) {
    CLI::App* c = app.add_subcommand(sub.name, sub.help);
    c->add_option("--config", flags.config, "JSON config")->check(CLI::ExistingFile);
    c->add_option("--alpha", flags.alphas, "alpha in [0, 1); repeatable")->allow_extra_args(false);
    c->add_option_function<int>("--depth", [&](int v) { flags.depth = v; }, "Cantor depth N");
    c->add_option("--out", flags.out, "output directory");
    c->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { flags.seed = v; }, "RNG seed");
    c->add_option_function<double>("--tolerance", [&](double v) { flags.tolerance = v; }, "audit tolerance");
    cmds.push_back(c);
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dirlab: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!cmds[i]->parsed()) continue;
      Settings s = resolve(flags, subs[i].defaults);
      std::string name = subs[i].name;
      if (name == "cantor") return cmd_cantor(s, out);
      if (name == "capacity") return cmd_capacity(s, out);
      if (name == "outer") return cmd_outer(s, out);
      if (name == "dirichlet-audit") return cmd_dirichlet_audit(s, out);
      return cmd_cyclicity(s, out, err);
    }
  } catch (const IoError& e) {
    err << "dirlab: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "dirlab: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OutOfRange& e) {
    err << "dirlab: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "dirlab: invalid config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "dirlab: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace dirlab
