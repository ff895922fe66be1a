#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pint/fem1d.hpp"
#include "pint/parareal.hpp"

namespace pint {

enum class Preset { Ex1a, Ex1b, Ex2, Custom };
enum class ProblemKind { Linear, AllenCahn };

/// Initial data on (0, pi).
enum class InitialData {
  SmoothCompatible,  // x^5 (pi - x)^5 / (pi/2)^10
  SmoothVerbatim,    // x^5 (1 - x)^5 / (pi/2)^10, nonzero at x = pi
  Step,              // indicator of (0, pi/2), L2 projected
  SignedStep,        // +1 on (0, pi/2), -1 on (pi/2, pi), L2 projected
  Cosine,            // cos x
};

enum class Forcing { None, CosTSinX };

const char* to_string(Preset p) noexcept;
const char* to_string(ProblemKind k) noexcept;
const char* to_string(InitialData d) noexcept;
const char* to_string(Forcing f) noexcept;

/// One parareal run. A config file holds one section per run.
struct ExperimentConfig {
  std::string name = "run";
  Preset preset = Preset::Custom;
  ProblemKind problem = ProblemKind::Linear;
  std::string scheme = "lobatto3c-2";
  int M = 200;
  Boundary bc = Boundary::Dirichlet;
  bool lumped_mass = false;
  InitialData u0 = InitialData::Step;
  Forcing forcing = Forcing::None;
  double epsilon = 1.0;
  double T = 1.0;
  double dt = 1.0 / 3000.0;
  int J = 2;
  int K_max = 30;
  StopRule stop = StopRule::FixedIterations;
  double tolerance = 1e-10;
  InitialGuess initial_guess = InitialGuess::CoarseSweep;
  int threads = 1;
  std::string output = "out";

  bool operator==(const ExperimentConfig&) const = default;

  /// Number of coarse intervals T / (J dt).
  int coarse_intervals() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Defaults shared by every run of a preset (problem, data, step sizes).
ExperimentConfig preset_base(Preset preset);

/// Throws ConfigError on an unknown name.
Preset parse_preset(const std::string& name);

/// Parses the sectioned key = value format. Blank lines and lines starting
/// with '#' are ignored. Every "[name]" header starts a run with default
/// fields; a "preset" key, which must come first, starts it from preset_base.
/// Throws ConfigError with line and field on malformed input.
std::vector<ExperimentConfig> parse_config(std::istream& in);
std::vector<ExperimentConfig> parse_config_file(const std::string& path);

/// Writes every field; reals in shortest round-trip form.
void emit_config(std::ostream& out, const std::vector<ExperimentConfig>& runs);

}  // namespace pint
