#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pint/rational.hpp"

namespace pint {

struct KappaValue {
  double alpha = 0.0;
  double kappa = 0.0;
  /// Location of the supremum; empty when it is only approached as s -> 0+.
  std::optional<double> argsup_s;

  bool zero_limit() const noexcept { return !argsup_s.has_value(); }
};

/// kappa_alpha = sup_{s>0} |((1+s) e^{-alpha s} - 1) / s| for alpha in [0, 2].
KappaValue kappa(double alpha);

/// kappa() at alpha = linspace(0, 2, n), n >= 2.
std::vector<KappaValue> kappa_curve(int n);

/// Upper envelope for kappa_alpha: e^{alpha-2} on [1, 2],
/// max(e^{alpha-2}, 1 - alpha) below 1.
double kappa_envelope(double alpha);

struct FactorReport {
  std::string scheme;
  int J = 0;
  double phi = 0.0;
  double argmax_s = 0.0;
  bool tail_bound_used = false;
  int grid_points = 0;
};

inline constexpr int kFactorGridPoints = 16384;

/// Phi(J) = sup_{s>0} |((1+s) r(-s/J)^J - 1) / s| where `r` is a function of
/// z (so r(-s/J) is r evaluated at z = -s/J). Throws DivergentFactor when the
/// result exceeds 1e3.
FactorReport parareal_factor(const RationalFn& r, int J, const std::string& scheme = {});

/// (s, |((1+s) r(-s/J)^J - 1)/s|) on `points` log-spaced s in [1e-4, 1e3].
std::vector<std::pair<double, double>> factor_profile(const RationalFn& r, int J, int points);

/// Phi(J) for J = J_min..J_max, computed on `threads` workers.
std::vector<FactorReport> factor_table(const RationalFn& r, int J_min, int J_max,
                                       const std::string& scheme = {}, int threads = 1);

struct ThresholdReport {
  int j_star = 0;
  double gamma = 0.0;
  std::vector<FactorReport> table;
};

/// Smallest J_* >= J_min with Phi(J) <= gamma for every J in [J_*, J_max].
/// Throws NoThreshold when Phi(J_max) > gamma.
ThresholdReport find_threshold(const RationalFn& r, double gamma, int J_max, int J_min = 2,
                               const std::string& scheme = {}, int threads = 1);

/// Same decision from an already computed table (ascending J).
int threshold_from_table(const std::vector<FactorReport>& table, double gamma);

struct SandwichReport {
  bool pass = false;
  /// min over the grid of min(r(-s) - e^{-beta s}, e^{-alpha s} - r(-s)).
  double worst_margin = 0.0;
  double worst_s = 0.0;
};

/// Checks e^{-beta s} <= r(-s) <= e^{-alpha s} on `points` uniform s in
/// (0, s_star].
SandwichReport sandwich_check(const RationalFn& r, double alpha, double beta, double s_star,
                              int points = 100000);

struct TailReport {
  double sup = 0.0;
  double argsup_s = 0.0;  // infinity when the limit dominates
};

/// sup_{s >= s_from} |r(-s)| from a dense log scan up to 1e8 plus |r(-inf)|.
TailReport tail_sup(const RationalFn& r, double s_from, int points = 100000);

}  // namespace pint
