#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pint/config.hpp"
#include "pint/convergence.hpp"
#include "pint/errors.hpp"
#include "pint/experiment.hpp"
#include "pint/format.hpp"
#include "pint/scheme_verify.hpp"
#include "pint/tableau.hpp"

namespace fs = std::filesystem;
using namespace pint;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kMismatch = 4 };

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::string> scheme_list(const std::string& arg) {
  if (arg == "all") return builtin_names();
  builtin(arg);  // UnknownScheme
  return {arg};
}

// ---- verify ---------------------------------------------------------------

struct VerifyOptions {
  std::string scheme = "all";
  bool jsonl = false;
};

int cmd_verify(const VerifyOptions& opt) {
  bool all_pass = true;
  for (const auto& name : scheme_list(opt.scheme)) {
    const SchemeSpec s = builtin(name);
    const P1Report p1 = verify_p1(s);
    const P3Report p3 = verify_p3(s);
    const OrderReport ord = measure_order(s);
    const int strict = verify_strict_accuracy(s);

    const bool order_ok = ord.measured_order == s.declared_order;
    const bool strict_ok = strict >= s.strictly_accurate_order;
    const bool pass = p1.pass && p3.pass && order_ok && strict_ok;
    all_pass = all_pass && pass;
    const char* stability = p3.l_stable ? "L-stable" : (p3.pass ? "A-stable-not-L-stable" : "not strongly stable");

    if (opt.jsonl) {
      nlohmann::json j;
      j["scheme"] = name;
      j["declared_order"] = s.declared_order;
      j["measured_order"] = ord.measured_order;
      j["order_slope"] = ord.slope;
      j["quadrature_order"] = ord.quadrature_order;
      j["strict_accuracy"] = strict;
      j["declared_strict_accuracy"] = s.strictly_accurate_order;
      j["p1"] = p1.pass;
      j["max_abs_r"] = p1.max_abs_r;
      j["max_abs_weight"] = p1.max_abs_weight;
      j["p3"] = p3.pass;
      j["r_at_infinity"] = p3.r_at_infinity;
      j["stability"] = stability;
      j["pass"] = pass;
      std::cout << j.dump() << '\n';
    } else {
      std::cout << name << ": order " << ord.measured_order << " (declared " << s.declared_order
                << ", slope " << format_double(std::round(ord.slope * 1000) / 1000) << ")"
                << ", quadrature order " << ord.quadrature_order << ", strict accuracy " << strict
                << ", |r(-inf)| = " << format_double(std::abs(p3.r_at_infinity)) << ", " << stability
                << ", P1 " << (p1.pass ? "ok" : "FAILED") << " -> " << (pass ? "pass" : "MISMATCH")
                << '\n';
    }
  }
  return all_pass ? kOk : kMismatch;
}

// ---- analyze / kappa-curve ------------------------------------------------

void write_kappa_curve(const fs::path& path, int n) {
  auto out = open_out(path);
  out << "alpha,kappa,argsup_s,bound\n";
  for (const auto& v : kappa_curve(n)) {
    out << format_double(v.alpha) << ',' << format_double(v.kappa) << ','
        << (v.argsup_s ? format_double(*v.argsup_s) : "") << ','
        << format_double(kappa_envelope(v.alpha)) << '\n';
  }
  std::cout << "wrote " << path.string() << '\n';
}

struct AnalyzeOptions {
  std::string scheme = "lobatto3c-2";
  std::optional<int> J;
  int J_min = 2;
  int J_max = 64;
  double gamma = 0.31;
  std::vector<double> alphas;
  int kappa_points = 0;
  std::string out = "out";
  int threads = 1;
};

int cmd_analyze(const AnalyzeOptions& opt) {
  if (opt.J_min < 1 || opt.J_max < opt.J_min) throw ConfigError("need 1 <= J-min <= J-max", 0, "J-max");
  if (opt.threads < 1) throw ConfigError("must be at least 1", 0, "threads");
  const SchemeSpec s = builtin(opt.scheme);

  for (double a : opt.alphas) {
    if (!(a >= 0.0 && a <= 2.0)) throw ConfigError("alpha must lie in [0, 2]", 0, "alpha");
    const KappaValue k = kappa(a);
    std::cout << "kappa(" << format_double(a) << ") = " << format_double(k.kappa) << " at s = "
              << (k.argsup_s ? format_double(*k.argsup_s) : std::string("0+")) << '\n';
  }
  if (opt.kappa_points > 0) write_kappa_curve(fs::path(opt.out) / "kappa_curve.csv", opt.kappa_points);

  if (opt.J) {
    if (*opt.J < 1) throw ConfigError("must be at least 1", 0, "J");
    const FactorReport f = parareal_factor(s.r, *opt.J, s.name);
    std::cout << s.name << ": Phi(" << *opt.J << ") = " << format_double(f.phi) << " at s = "
              << format_double(f.argmax_s) << (f.tail_bound_used ? " (tail bound)" : "") << '\n';
    const fs::path path = fs::path(opt.out) / ("profile_" + s.name + "_J" + std::to_string(*opt.J) + ".csv");
    auto out = open_out(path);
    out << "s,factor\n";
    for (const auto& [x, y] : factor_profile(s.r, *opt.J, 2001)) {
      out << format_double(x) << ',' << format_double(y) << '\n';
    }
    std::cout << "wrote " << path.string() << '\n';
    return kOk;
  }

  const auto table = factor_table(s.r, opt.J_min, opt.J_max, s.name, opt.threads);
  const fs::path path = fs::path(opt.out) / ("factor_" + s.name + ".csv");
  {
    auto out = open_out(path);
    out << "J,phi,argmax_s,tail_bound_used\n";
    for (const auto& f : table) {
      out << f.J << ',' << format_double(f.phi) << ',' << format_double(f.argmax_s) << ','
          << (f.tail_bound_used ? 1 : 0) << '\n';
    }
  }
  std::cout << "wrote " << path.string() << '\n';
  const int j_star = threshold_from_table(table, opt.gamma);
  std::cout << s.name << ": J_* = " << j_star << " for gamma = " << format_double(opt.gamma)
            << " (J <= " << opt.J_max << ")\n";
  return kOk;
}

// ---- run ------------------------------------------------------------------

struct RunOptions {
  std::string preset;
  std::string config;
  std::string scheme;
  std::optional<int> J;
  std::optional<int> M;
  std::optional<int> K_max;
  std::optional<int> threads;
  std::string out;
  bool dry_run = false;
};

std::vector<ExperimentConfig> collect_runs(const RunOptions& opt) {
  std::vector<ExperimentConfig> runs;
  if (!opt.preset.empty()) {
    for (auto& c : expand_preset(parse_preset(opt.preset), opt.M.value_or(0))) {
      if (!opt.scheme.empty() && c.scheme != opt.scheme) continue;
      if (opt.J && c.J != *opt.J) continue;
      runs.push_back(std::move(c));
    }
    if (runs.empty()) throw ConfigError("no preset run matches the --scheme/--J filter", 0, "preset");
  } else {
    runs = parse_config_file(opt.config);
    for (auto& c : runs) {
      if (!opt.scheme.empty()) c.scheme = opt.scheme;
      if (opt.J) c.J = *opt.J;
      if (opt.M) c.M = *opt.M;
    }
  }
  for (auto& c : runs) {
    if (opt.K_max) c.K_max = *opt.K_max;
    if (opt.threads) c.threads = *opt.threads;
    if (!opt.out.empty()) c.output = opt.out;
    c.validate();
  }
  return runs;
}

int cmd_run(const RunOptions& opt) {
  const auto runs = collect_runs(opt);
  if (opt.dry_run) {
    emit_config(std::cout, runs);
    return kOk;
  }
  std::map<std::string, std::vector<ExperimentConfig>> by_dir;
  for (const auto& c : runs) {
    const RunArtifact art = run_experiment(c);
    const std::string csv = write_artifact(art, c.output);
    by_dir[c.output].push_back(c);
    std::cout << c.name << ": factor "
              << (art.factor ? format_double(std::round(*art.factor * 1e4) / 1e4) : "n/a")
              << ", " << art.history.corrections << " corrections, "
              << format_double(std::round(art.wall_ms)) << " ms";
    if (c.problem == ProblemKind::AllenCahn) {
      std::cout << ", newton max " << art.newton.max_iterations;
    }
    std::cout << " -> " << csv << '\n';
  }
  const std::string title = opt.preset.empty() ? "parareal runs" : opt.preset;
  for (const auto& [dir, group] : by_dir) {
    const fs::path gp = fs::path(dir) / (opt.preset.empty() ? "runs.gp" : opt.preset + ".gp");
    write_gnuplot_stub(gp.string(), group, title);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parareal with implicit Runge-Kutta fine propagators"};
  app.require_subcommand(1);
  std::optional<long> seed;
  app.add_option("--seed", seed, "Reserved; every algorithm here is deterministic");

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Check stability, order and strict accuracy of schemes");
  verify->add_option("--scheme", vopt.scheme, "Scheme name or 'all'")->capture_default_str();
  verify->add_flag("--jsonl", vopt.jsonl, "One JSON object per scheme");

  AnalyzeOptions aopt;
  auto* analyze = app.add_subcommand("analyze", "Convergence factor table and threshold J_*");
  analyze->add_option("--scheme", aopt.scheme)->capture_default_str();
  analyze->add_option("--J", aopt.J, "Report Phi(J) for this J only");
  analyze->add_option("--J-min", aopt.J_min)->capture_default_str();
  analyze->add_option("--J-max", aopt.J_max)->capture_default_str();
  analyze->add_option("--gamma", aopt.gamma)->capture_default_str();
  analyze->add_option("--alpha", aopt.alphas, "Print kappa_alpha");
  analyze->add_option("--kappa-curve", aopt.kappa_points, "Also write kappa_curve.csv with N points");
  analyze->add_option("--out", aopt.out, "Output directory")->capture_default_str();
  analyze->add_option("--threads", aopt.threads)->capture_default_str();

  RunOptions ropt;
  auto* runcmd = app.add_subcommand("run", "Run parareal experiments and write CSV histories");
  auto* preset_opt = runcmd->add_option("--preset", ropt.preset, "ex1a, ex1b or ex2");
  auto* config_opt = runcmd->add_option("--config", ropt.config, "Config file with one section per run");
  preset_opt->excludes(config_opt);
  runcmd->add_option("--scheme", ropt.scheme, "Preset filter, or override for config runs");
  runcmd->add_option("--J", ropt.J, "Preset filter, or override for config runs");
  runcmd->add_option("--M", ropt.M, "Spatial intervals");
  runcmd->add_option("--K-max", ropt.K_max, "Maximum number of corrections");
  runcmd->add_option("--threads", ropt.threads);
  runcmd->add_option("--out", ropt.out, "Output directory (default: the config's output)");
  runcmd->add_flag("--dry-run", ropt.dry_run, "Print the expanded configuration and stop");

  int kappa_n = 201;
  std::string kappa_out = "out/kappa_curve.csv";
  auto* kc = app.add_subcommand("kappa-curve", "Write kappa_alpha on a uniform alpha grid in [0, 2]");
  kc->add_option("--n", kappa_n)->capture_default_str();
  kc->add_option("--out", kappa_out, "CSV path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*verify) return cmd_verify(vopt);
    if (*analyze) return cmd_analyze(aopt);
    if (*runcmd) {
      if (ropt.preset.empty() && ropt.config.empty()) {
        throw ConfigError("one of --preset or --config is required");
      }
      return cmd_run(ropt);
    }
    if (*kc) {
      if (kappa_n < 2) throw ConfigError("must be at least 2", 0, "n");
      write_kappa_curve(kappa_out, kappa_n);
      return kOk;
    }
  } catch (const OrderMismatch& e) {
    std::cerr << "verification mismatch: " << e.what() << '\n';
    return kMismatch;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
