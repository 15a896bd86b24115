// Command-line surface over the library: parameter validation, velocity
// bound, classical actions, propagation kernels (three methods), oscillator
// spectra, and the built-in consistency suites. All output is JSON (or CSV
// for tabular commands); every document echoes the argv it was produced
// from, so runs are reproducible from their own output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "gup/gup.hpp"

using json = nlohmann::ordered_json;
using namespace gup;

namespace {

constexpr int kSchemaVersion = 1;

struct RunConfig {
  double q0 = 0.0, qf = 0.0, T = 1.0, omega = 1.0;
  double alpha = 0.0, beta = 0.0, mass = 1.0, hbar = 1.0;
  bool oracle = false;
  double euclidean = 0.0; // 0 = real time
  int trunc = 60;
  int slices = 1;
  long samples = 0;
  std::uint64_t seed = 1;
  int n_max = 64;
  int levels = 10;
  std::string format = "json";
};

int env_threads() {
  const char* v = std::getenv("GUP_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n < 1 ? 1 : n;
}

GupParams params_of(const RunConfig& c) {
  GupParams p;
  p.alpha = c.alpha;
  p.beta = c.beta;
  p.mass = c.mass;
  p.hbar = c.hbar;
  return p;
}

json args_json(int argc, char** argv) {
  json a = json::array();
  for (int i = 1; i < argc; ++i) a.push_back(argv[i]);
  return a;
}

json doc_base(int argc, char** argv) {
  json d;
  d["schema_version"] = kSchemaVersion;
  d["args"] = args_json(argc, argv);
  return d;
}

void emit(const json& d, const std::string& format) {
  if (format == "csv") {
    // flat key,value rows; arrays expand to one row per element
    std::cout << "key,value\n";
    for (auto& [k, v] : d.items()) {
      if (v.is_array()) {
        for (size_t i = 0; i < v.size(); ++i)
          std::cout << k << "[" << i << "]," << v[i].dump() << "\n";
      } else {
        std::cout << k << "," << v.dump() << "\n";
      }
    }
  } else {
    std::cout << d.dump(2) << "\n";
  }
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json kernel_json(const KernelValue& k) {
  json d;
  d["re"] = k.amplitude.real();
  d["im"] = k.amplitude.imag();
  switch (k.method) {
    case KernelMethod::semiclassical: d["method"] = "semiclassical"; break;
    case KernelMethod::spectral: d["method"] = "spectral"; break;
    case KernelMethod::lattice: d["method"] = "lattice"; break;
  }
  d["meta"] = json(k.meta);
  return d;
}

// ----------------------------------------------------------- subcommands

json run_validate(const RunConfig& c) {
  const auto r = validate_params(params_of(c));
  json d;
  d["real_root"] = r.real_root;
  d["nondegenerate"] = r.nondegenerate;
  d["positive_vmax"] = r.positive_vmax;
  if (r.n_gt_3) d["n_gt_3"] = *r.n_gt_3;
  d["messages"] = r.messages;
  return d;
}

json run_vmax(const RunConfig& c) {
  json d;
  d["vmax"] = max_free_velocity(params_of(c));
  return d;
}

json run_action(const RunConfig& c, const std::string& system) {
  const GupParams p = params_of(c);
  const bool free = system == "free";
  const Boundary b{c.q0, c.qf, c.T, free ? 0.0 : c.omega};
  const ActionBreakdown s = free ? free_action(b, p) : ho_action(b, p);
  json d;
  d["system"] = system;
  d["s0"] = s.s0;
  d["s_alpha"] = s.s_alpha;
  d["s_alpha2"] = s.s_alpha2;
  d["s_beta"] = s.s_beta;
  d["total"] = s.total;
  if (c.oracle) {
    const Potential v = free ? Potential{} : Potential{[&](double q) {
      return 0.5 * p.mass * b.omega * b.omega * q * q;
    }};
    const Trajectory tr = free ? free_trajectory(b, p) : ho_trajectory(b, p);
    const double quad = action_quadrature(tr, p, v);
    d["oracle_quadrature"] = quad;
    d["oracle_discrepancy"] = s.total - quad;
    const Trajectory shot = bvp_shoot(b, p, v);
    double sup = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = b.T * i / 200.0;
      sup = std::max(sup, std::abs(shot.position(t) - tr.position(t)));
    }
    d["oracle_shooting_supnorm"] = sup;
  }
  return d;
}

json run_kernel(const RunConfig& c, const std::string& system, const std::string& method) {
  const GupParams p = params_of(c);
  const bool free = system == "free";
  const Boundary b{c.q0, c.qf, c.T, free ? 0.0 : c.omega};
  const bool euclid = c.euclidean > 0.0;

  if (method == "semiclassical") {
    KernelValue k;
    if (free)
      k = euclid ? free_kernel_euclidean(b, c.euclidean, p) : free_kernel(b, p);
    else
      k = euclid ? ho_kernel_semiclassical_euclidean(b, c.euclidean, p)
                 : ho_kernel_semiclassical(b, p);
    return kernel_json(k);
  }
  if (method == "spectral") {
    if (free)
      throw physics_error("unsupported", "the spectral route needs the oscillator basis (omega > 0)");
    if (!euclid)
      throw physics_error("convergence", "the spectral sum needs --euclidean TAU (real-time sum does not converge)");
    HermiteBasis basis{p.mass, b.omega, p.hbar, std::max(c.n_max, c.trunc + 4)};
    return kernel_json(spectral_kernel(p, basis, b, cplx(0.0, -c.euclidean), c.trunc));
  }
  if (method == "lattice") {
    if (!euclid)
      throw physics_error("convergence", "the lattice route needs --euclidean TAU");
    const Potential v = free ? Potential{} : Potential{[=](double q) {
      return 0.5 * p.mass * b.omega * b.omega * q * q;
    }};
    SliceConfig cfg;
    cfg.n_slices = c.slices;
    cfg.tau = c.euclidean / c.slices;
    if (c.samples > 0) {
      const auto est = euclidean_mc_kernel(b, cfg, p, v, c.samples, c.seed, env_threads());
      json d;
      d["method"] = "lattice";
      d["estimator"] = "bridge reweighting ratio";
      d["mean"] = complex_json(est.mean);
      d["std_error"] = est.std_error;
      d["n_samples"] = est.n_samples;
      d["seed"] = est.seed;
      d["n_slices"] = cfg.n_slices;
      return d;
    }
    return kernel_json(sliced_kernel_quadrature(b, cfg, p, v));
  }
  throw physics_error("bad_method", "unknown kernel method: " + method);
}

json run_spectrum(const RunConfig& c) {
  const GupParams p = params_of(c);
  HermiteBasis basis{p.mass, c.omega, p.hbar, c.n_max};
  const auto numeric = diagonalize_oracle(hamiltonian_matrix(p, basis));
  json d;
  json pert = json::array(), num = json::array(), delta = json::array();
  const int levels = std::min(c.levels, c.n_max);
  for (int n = 0; n < levels; ++n) {
    const double e = energy_n(p, basis, n);
    pert.push_back(e);
    num.push_back(numeric.energies[n]);
    delta.push_back(numeric.energies[n] - e);
  }
  d["perturbative"] = pert;
  d["numeric"] = num;
  d["delta"] = delta;
  d["n_max"] = c.n_max;
  return d;
}

json run_check_jacobi() {
  json d;
  json cs = json::array();
  for (auto& eq : algebra::solve_jacobi_constraints(algebra::jacobi_residual()).equations)
    cs.push_back(algebra::format_constraint(eq));
  d["constraints"] = cs;
  json rep = json::array();
  for (auto& eq : algebra::match_representation().equations)
    rep.push_back(algebra::format_constraint(eq));
  d["representation"] = rep;
  d["n1_special_case"] = algebra::beta_relation_at(1);
  return d;
}

json run_check_mehler() {
  double worst = 0.0;
  int points = 0;
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n)
      for (double t : {-0.3, -0.1, 0.05, 0.2, 0.3})
        for (double x : {-2.0, -0.7, 0.0, 1.1, 2.0})
          for (double y : {-2.0, -0.5, 0.3, 1.4, 2.0}) {
            const cplx closed = mehler_closed(m, n, cplx(t), x, y);
            double scale = 0.0;
            const cplx partial = mehler_partial(m, n, cplx(t), x, y, 60, &scale);
            // deviation against the summation's working magnitude: the net
            // value is a heavy cancellation of terms reaching ~1e6
            worst = std::max(worst, std::abs(closed - partial) / std::max(scale, 1.0));
            ++points;
          }
  json d;
  d["points"] = points;
  d["max_scaled_deviation"] = worst;
  d["tolerance"] = 1e-9;
  d["pass"] = worst < 1e-9;
  return d;
}

json run_check_eom(const RunConfig& c) {
  const double a0 = 1e-2, b0 = (a0 * a0) * 5.0;
  json lad = json::array();
  std::vector<double> sups;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    GupParams p;
    p.alpha = eps * a0;
    p.beta = eps * eps * b0;
    p.mass = c.mass;
    p.hbar = c.hbar;
    const Boundary b{0.3, 0.8, 1.0, 1.0};
    auto res = eom_residual(ho_trajectory(b, p), p);
    double sup = 0.0;
    for (int i = 0; i <= 200; ++i) sup = std::max(sup, std::abs(res(b.T * i / 200.0)));
    sups.push_back(sup);
    lad.push_back(json{{"epsilon", eps}, {"residual_sup", sup}});
  }
  const double slope = std::log10(sups[0] / sups[2]) / 2.0;
  json d;
  d["ladder"] = lad;
  d["loglog_slope"] = slope;
  return d;
}

json run_check_kernel_consistency(const RunConfig& c) {
  const GupParams p0 = params_of(c);
  const Boundary b{0.2, 0.5, 1.0, 1.0};
  const double tau = 1.0;
  HermiteBasis basis{p0.mass, b.omega, p0.hbar, 120};
  const cplx tc(0.0, -tau);

  auto slope_of = [&](auto&& eval, double* base_out) {
    const double h = 1e-6;
    GupParams pa = p0, pb = p0;
    pa.alpha = h;
    pb.beta = h;
    GupParams pz = p0;
    pz.alpha = pz.beta = 0.0;
    const cplx k0 = eval(pz);
    if (base_out) *base_out = std::abs(k0);
    return std::pair<cplx, cplx>{(eval(pa) - k0) / h, (eval(pb) - k0) / h};
  };

  double base_spectral = 0.0;
  auto [sa, sb] = slope_of(
      [&](const GupParams& p) { return spectral_kernel(p, basis, b, tc, 80).amplitude; },
      &base_spectral);
  auto [ta, tb] = slope_of(
      [&](const GupParams& p) { return ho_kernel_tilde(p, basis, b, tc).amplitude; }, nullptr);
  auto [ca, cb] = slope_of(
      [&](const GupParams& p) {
        return ho_kernel_semiclassical_euclidean(b, tau, p).amplitude;
      },
      nullptr);

  auto rel = [](cplx x, cplx y) { return std::abs(x - y) / std::max(std::abs(x), 1e-300); };
  json d;
  d["base_amplitude"] = base_spectral;
  d["alpha_slope"] = json{{"spectral", complex_json(sa)},
                          {"tilde", complex_json(ta)},
                          {"semiclassical", complex_json(ca)}};
  d["beta_slope"] = json{{"spectral", complex_json(sb)},
                         {"tilde", complex_json(tb)},
                         {"semiclassical", complex_json(cb)}};
  d["alpha_rel_spread"] = std::max(rel(sa, ta), rel(sa, ca));
  d["beta_rel_spread"] = std::max(rel(sb, tb), rel(sb, cb));
  d["pass"] = std::max(rel(sa, ta), rel(sa, ca)) < 1e-5 &&
              std::max(rel(sb, tb), rel(sb, cb)) < 1e-5;
  return d;
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw physics_error("config", "cannot open config file: " + path);
  json j = json::parse(in);
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j[key].get<std::decay_t<decltype(slot)>>();
  };
  get("q0", c.q0);
  get("qf", c.qf);
  get("T", c.T);
  get("omega", c.omega);
  get("alpha", c.alpha);
  get("beta", c.beta);
  get("mass", c.mass);
  get("hbar", c.hbar);
  get("oracle", c.oracle);
  get("euclidean", c.euclidean);
  get("trunc", c.trunc);
  get("slices", c.slices);
  get("samples", c.samples);
  get("seed", c.seed);
  get("n_max", c.n_max);
  get("levels", c.levels);
  get("format", c.format);
}

} // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // config file values become the defaults the flags then override
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config_file(cfg, argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
    }
  }

  CLI::App app{"deformed-algebra propagation kernels and spectra"};
  app.require_subcommand(1);
  std::string config_path, system, method = "semiclassical", suite;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--q0", cfg.q0, "initial position");
    sub->add_option("--qf", cfg.qf, "final position");
    sub->add_option("--T", cfg.T, "propagation time");
    sub->add_option("--omega", cfg.omega, "oscillator frequency");
    sub->add_option("--alpha", cfg.alpha, "linear deformation coupling");
    sub->add_option("--beta", cfg.beta, "quadratic deformation coupling");
    sub->add_option("--mass", cfg.mass, "particle mass");
    sub->add_option("--hbar", cfg.hbar, "reduced Planck constant");
    sub->add_option("--format", cfg.format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--config", config_path, "JSON file with default values");
  };

  auto* validate_cmd = app.add_subcommand("validate", "parameter constraint report");
  add_common(validate_cmd);
  auto* vmax_cmd = app.add_subcommand("vmax", "free-particle velocity bound");
  add_common(vmax_cmd);
  auto* action_cmd = app.add_subcommand("action", "classical action breakdown");
  action_cmd->add_option("system", system, "free|ho")->required()->check(CLI::IsMember({"free", "ho"}));
  action_cmd->add_flag("--oracle", cfg.oracle, "append quadrature/shooting cross-checks");
  add_common(action_cmd);
  auto* kernel_cmd = app.add_subcommand("kernel", "propagation kernel");
  kernel_cmd->add_option("system", system, "free|ho")->required()->check(CLI::IsMember({"free", "ho"}));
  kernel_cmd->add_option("--method", method, "semiclassical|spectral|lattice")
      ->check(CLI::IsMember({"semiclassical", "spectral", "lattice"}));
  kernel_cmd->add_option("--euclidean", cfg.euclidean, "Euclidean time tau (T -> -i tau)");
  kernel_cmd->add_option("--trunc", cfg.trunc, "spectral sum truncation");
  kernel_cmd->add_option("--n-max", cfg.n_max, "basis size");
  kernel_cmd->add_option("--slices", cfg.slices, "number of time slices");
  kernel_cmd->add_option("--samples", cfg.samples, "Monte Carlo samples (0 = quadrature)");
  kernel_cmd->add_option("--seed", cfg.seed, "Monte Carlo seed");
  add_common(kernel_cmd);
  auto* spectrum_cmd = app.add_subcommand("spectrum", "perturbative vs numeric energies");
  spectrum_cmd->add_option("--n-max", cfg.n_max, "basis size");
  spectrum_cmd->add_option("--levels", cfg.levels, "levels to report");
  add_common(spectrum_cmd);
  auto* check_cmd = app.add_subcommand("check", "built-in consistency suites");
  check_cmd->add_option("suite", suite, "jacobi|mehler|eom-scaling|kernel-consistency")
      ->required()
      ->check(CLI::IsMember({"jacobi", "mehler", "eom-scaling", "kernel-consistency"}));
  add_common(check_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  json doc = doc_base(argc, argv);
  try {
    json body;
    if (*validate_cmd) body = run_validate(cfg);
    else if (*vmax_cmd) body = run_vmax(cfg);
    else if (*action_cmd) body = run_action(cfg, system);
    else if (*kernel_cmd) body = run_kernel(cfg, system, method);
    else if (*spectrum_cmd) body = run_spectrum(cfg);
    else if (suite == "jacobi") body = run_check_jacobi();
    else if (suite == "mehler") body = run_check_mehler();
    else if (suite == "eom-scaling") body = run_check_eom(cfg);
    else body = run_check_kernel_consistency(cfg);
    doc.update(body);
    emit(doc, cfg.format);
    return 0;
  } catch (const physics_error& e) {
    doc["error"] = json{{"code", e.code()}, {"message", e.what()}};
    emit(doc, cfg.format);
    return 1;
  } catch (const std::exception& e) {
    doc["error"] = json{{"code", "internal"}, {"message", e.what()}};
    emit(doc, cfg.format);
    return 1;
  }
}
