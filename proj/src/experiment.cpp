#include "pint/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>

#include "pint/errors.hpp"
#include "pint/format.hpp"
#include "pint/tableau.hpp"

#ifndef PINT_BUILD_ID
#define PINT_BUILD_ID "unknown"
#endif

namespace pint {

namespace {

constexpr double kPi = std::numbers::pi;

std::string run_name(const ExperimentConfig& c, const std::string& tag) {
  return std::string(to_string(c.preset)) + "-" + c.scheme + "-" + tag;
}

void write_file(const std::filesystem::path& path, const std::string& what,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + what + " '" + path.string() + "'");
  body(out);
  if (!out) throw DomainError("failed while writing '" + path.string() + "'");
}

}  // namespace

const char* build_id() noexcept { return PINT_BUILD_ID; }

std::vector<ExperimentConfig> expand_preset(Preset preset, int M) {
  if (preset == Preset::Custom) throw ConfigError("preset 'custom' needs a config file", 0, "preset");
  const ExperimentConfig base = preset_base(preset);
  std::vector<ExperimentConfig> runs;
  if (preset == Preset::Ex1a) {
    for (const char* scheme : {"lobatto3c-2", "lobatto3c-3"}) {
      for (int N : {100, 300, 600}) {
        ExperimentConfig c = base;
        c.scheme = scheme;
        c.dt = 1.0 / (c.J * N);
        c.name = run_name(c, "N" + std::to_string(N));
        runs.push_back(c);
      }
    }
  } else {
    for (const char* scheme : {"lobatto3c-2", "lobatto3c-3", "lobatto3c-4", "calahan"}) {
      for (int J : {2, 3, 10}) {
        ExperimentConfig c = base;
        c.scheme = scheme;
        c.J = J;
        c.K_max = std::min(30, c.coarse_intervals());
        c.name = run_name(c, "J" + std::to_string(J));
        runs.push_back(c);
      }
    }
  }
  for (auto& c : runs) {
    if (M > 0) c.M = M;
    c.validate();
  }
  return runs;
}

Vector initial_state(const ExperimentConfig& cfg, const FemSystem& fem) {
  const double norm = std::pow(kPi / 2.0, 10);
  switch (cfg.u0) {
    case InitialData::SmoothCompatible:
      return interpolate(fem.mesh, [norm](double x) { return std::pow(x * (kPi - x), 5) / norm; });
    case InitialData::SmoothVerbatim:
      return interpolate(fem.mesh, [norm](double x) { return std::pow(x * (1.0 - x), 5) / norm; });
    case InitialData::Step:
      return project_indicator(fem, 0.0, kPi / 2.0);
    case InitialData::SignedStep: {
      Vector u = project_indicator(fem, 0.0, kPi / 2.0);
      const Vector right = project_indicator(fem, kPi / 2.0, kPi);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] -= right[i];
      return u;
    }
    case InitialData::Cosine:
      return interpolate(fem.mesh, [](double x) { return std::cos(x); });
  }
  throw DomainError("unhandled initial data");
}

RunArtifact run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunArtifact art;
  art.config = cfg;
  art.build_id = build_id();

  const Mesh1D mesh(cfg.M, cfg.bc);
  const SchemeSpec scheme = builtin(cfg.scheme);

  PararealConfig pc;
  pc.coarse_intervals = cfg.coarse_intervals();
  pc.J = cfg.J;
  pc.dt = cfg.dt;
  pc.K_max = cfg.K_max;
  pc.stop = cfg.stop;
  pc.tolerance = cfg.tolerance;
  pc.initial_guess = cfg.initial_guess;
  pc.threads = cfg.threads;

  const auto start = std::chrono::steady_clock::now();
  if (cfg.problem == ProblemKind::Linear) {
    std::function<double(double, double)> forcing;
    if (cfg.forcing == Forcing::CosTSinX) {
      forcing = [](double x, double t) { return std::cos(t) * std::sin(x); };
    }
    auto problem = std::make_shared<LinearProblem>(
        LinearProblem{assemble(mesh, cfg.lumped_mass), std::move(forcing), cfg.T});
    const BackwardEulerLinear coarse(problem, pc.coarse_step());
    const ImplicitRKLinear fine(problem, scheme, cfg.dt);
    art.history = run(problem->fem, coarse, fine, initial_state(cfg, problem->fem), pc);
  } else {
    auto problem = std::make_shared<SemilinearProblem>(
        SemilinearProblem{assemble(mesh, cfg.lumped_mass), cfg.epsilon, cfg.T});
    const SemiImplicitEuler coarse(problem, pc.coarse_step());
    const ImplicitRKSemilinear fine(problem, scheme, cfg.dt);
    art.history = run(problem->fem, coarse, fine, initial_state(cfg, problem->fem), pc);
    art.newton = fine.stats();
  }
  art.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  try {
    art.factor = measured_factor(art.history);
  } catch (const InsufficientData&) {
    art.factor.reset();
  }
  return art;
}

std::string write_artifact(const RunArtifact& art, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base = fs::path(dir) / art.config.name;
  const fs::path csv = fs::path(base).concat(".csv");

  write_file(csv, "history", [&](std::ostream& out) { write_history_csv(out, art.history); });
  write_file(fs::path(base).concat(".cfg"), "config echo",
             [&](std::ostream& out) { emit_config(out, {art.config}); });
  write_file(fs::path(base).concat(".summary"), "summary", [&](std::ostream& out) {
    const auto& c = art.config;
    out << "name = " << c.name << '\n';
    out << "scheme = " << c.scheme << '\n';
    out << "problem = " << to_string(c.problem) << '\n';
    out << "M = " << c.M << '\n';
    out << "J = " << c.J << '\n';
    out << "coarse_intervals = " << c.coarse_intervals() << '\n';
    out << "measured_factor = " << (art.factor ? format_double(*art.factor) : "insufficient-data")
        << '\n';
    out << "corrections = " << art.history.corrections << '\n';
    out << "converged = " << (art.history.converged ? "true" : "false") << '\n';
    out << "budget_exceeded = " << (art.history.budget_exceeded ? "true" : "false") << '\n';
    if (!art.history.iterations.empty()) {
      out << "final_error = " << format_double(art.history.iterations.back().max_error) << '\n';
    }
    out << "wall_ms = " << format_double(art.wall_ms) << '\n';
    if (c.problem == ProblemKind::AllenCahn) {
      out << "newton_steps = " << art.newton.steps << '\n';
      out << "newton_iterations = " << art.newton.iterations << '\n';
      out << "newton_max_iterations = " << art.newton.max_iterations << '\n';
    }
    out << "build_id = " << art.build_id << '\n';
  });
  return csv.string();
}

void write_gnuplot_stub(const std::string& path, const std::vector<ExperimentConfig>& runs,
                        const std::string& title) {
  write_file(path, "gnuplot script", [&](std::ostream& out) {
    out << "set datafile separator ','\n";
    out << "set logscale y\n";
    out << "set format y '%.0e'\n";
    out << "set xlabel 'k'\n";
    out << "set ylabel 'max_n error'\n";
    out << "set title '" << title << "'\n";
    out << "plot \\\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      out << "  '" << runs[i].name << ".csv' skip 1 using 1:2 with linespoints title '"
          << runs[i].name << "'" << (i + 1 < runs.size() ? ", \\\n" : "\n");
    }
  });
}

}  // namespace pint
