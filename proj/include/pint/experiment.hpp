#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pint/config.hpp"
#include "pint/parareal.hpp"

namespace pint {

/// All runs of a preset: one per (scheme, J) pair, or per (scheme, coarse
/// step) for ex1a. M overrides the mesh of every run when positive.
std::vector<ExperimentConfig> expand_preset(Preset preset, int M = 0);

struct RunArtifact {
  ExperimentConfig config;
  IterationHistory history;
  std::optional<double> factor;  // empty when measured_factor had too little data
  double wall_ms = 0.0;
  NewtonStats newton;            // Allen-Cahn runs only
  std::string build_id;
};

/// Builds the problem and propagators described by `cfg` and runs parareal.
RunArtifact run_experiment(const ExperimentConfig& cfg);

/// Initial state for a config on a given system.
Vector initial_state(const ExperimentConfig& cfg, const FemSystem& fem);

/// Writes <dir>/<name>.csv (iteration history), <dir>/<name>.summary and
/// <dir>/<name>.cfg. Returns the CSV path.
std::string write_artifact(const RunArtifact& art, const std::string& dir);

/// gnuplot script plotting every CSV of `runs` on a log scale.
void write_gnuplot_stub(const std::string& path, const std::vector<ExperimentConfig>& runs,
                        const std::string& title);

const char* build_id() noexcept;

}  // namespace pint
