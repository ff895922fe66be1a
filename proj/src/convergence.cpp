#include "pint/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "pint/errors.hpp"

namespace pint {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kRefineTol = 1e-10;
constexpr double kDivergenceLimit = 1e3;

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> s(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  s.front() = lo;
  s.back() = hi;
  return s;
}

struct Extremum {
  double value = -std::numeric_limits<double>::infinity();
  double arg = 0.0;
  std::size_t index = 0;
};

template <class F>
double golden_max(F f, double a, double b, double* arg) {
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && b - a > kRefineTol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 >= f2) {
    *arg = x1;
    return f1;
  }
  *arg = x2;
  return f2;
}

// Max of sign*g over the grid, then golden-section refinement on the two
// cells around the best sample. Never returns less than the best sample.
template <class G>
Extremum envelope(G g, const std::vector<double>& s, const std::vector<double>& values, double sign) {
  Extremum best;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = sign * values[i];
    if (v > best.value) best = {v, s[i], i};
  }
  const std::size_t lo = best.index == 0 ? 0 : best.index - 1;
  const std::size_t hi = std::min(best.index + 1, s.size() - 1);
  double arg = best.arg;
  const double refined = golden_max([&](double x) { return sign * g(x); }, s[lo], s[hi], &arg);
  if (refined > best.value) {
    best.value = refined;
    best.arg = arg;
  }
  return best;
}

// Signed sup search: refines the positive and negative envelopes separately
// so the kink of |g| at a sign change is never straddled.
template <class G>
Extremum abs_sup(G g, const std::vector<double>& s) {
  std::vector<double> values(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) values[i] = g(s[i]);
  const Extremum up = envelope(g, s, values, 1.0);
  const Extremum down = envelope(g, s, values, -1.0);
  return up.value >= down.value ? up : down;
}

}  // namespace

KappaValue kappa(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw DomainError("kappa requires alpha in [0, 2]");
  auto g = [alpha](double s) { return (std::expm1(-alpha * s) + s * std::exp(-alpha * s)) / s; };
  const std::vector<double> s = log_grid(1e-8, 50.0, 8192);
  const Extremum best = abs_sup(g, s);
  const double limit0 = std::abs(1.0 - alpha);

  KappaValue out{alpha, std::max(best.value, limit0), std::nullopt};
  // Rounding can lift the refined value a hair above the s -> 0+ limit.
  if (best.index != 0 && best.value > limit0 + 1e-9) out.argsup_s = best.arg;
  return out;
}

std::vector<KappaValue> kappa_curve(int n) {
  if (n < 2) throw DomainError("kappa_curve needs n >= 2");
  std::vector<KappaValue> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(kappa(i == n - 1 ? 2.0 : 2.0 * i / (n - 1)));
  return out;
}

double kappa_envelope(double alpha) {
  const double e = std::exp(alpha - 2.0);
  return alpha >= 1.0 ? e : std::max(e, 1.0 - alpha);
}

FactorReport parareal_factor(const RationalFn& r, int J, const std::string& scheme) {
  if (J < 1) throw DomainError("parareal_factor requires J >= 1");
  const double s_max = std::max(1e4, 100.0 * J);
  auto g = [&r, J](double s) { return ((1.0 + s) * std::pow(r(-s / J), J) - 1.0) / s; };
  const std::vector<double> s = log_grid(1e-8, s_max, kFactorGridPoints);
  const Extremum best = abs_sup(g, s);

  // Beyond s_max: |g| <= (1+s)/s |r(-s/J)|^J + 1/s.
  const double r_end = std::max(std::abs(r(-s_max / J)), std::abs(r.value_at_infinity()));
  const double tail = (1.0 + 1.0 / s_max) * std::pow(r_end, J) + 1.0 / s_max;

  FactorReport rep{scheme, J, best.value, best.arg, false, kFactorGridPoints};
  if (tail > rep.phi) {
    rep.phi = tail;
    rep.argmax_s = s_max;
    rep.tail_bound_used = true;
  }
  if (!(rep.phi <= kDivergenceLimit)) {
    throw DivergentFactor("convergence factor " + std::to_string(rep.phi) + " at J=" +
                          std::to_string(J) + " exceeds 1e3");
  }
  return rep;
}

std::vector<std::pair<double, double>> factor_profile(const RationalFn& r, int J, int points) {
  if (J < 1 || points < 2) throw DomainError("factor_profile requires J >= 1 and points >= 2");
  std::vector<std::pair<double, double>> out;
  for (double s : log_grid(1e-4, 1e3, points)) {
    out.emplace_back(s, std::abs(((1.0 + s) * std::pow(r(-s / J), J) - 1.0) / s));
  }
  return out;
}

std::vector<FactorReport> factor_table(const RationalFn& r, int J_min, int J_max,
                                       const std::string& scheme, int threads) {
  if (J_min < 1 || J_max < J_min || J_max > 1024) {
    throw DomainError("factor table needs 1 <= J_min <= J_max <= 1024");
  }
  std::vector<FactorReport> table(static_cast<std::size_t>(J_max - J_min + 1));
  std::atomic<int> next{J_min};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int J = next++; J <= J_max && !failed; J = next++) {
      try {
        table[static_cast<std::size_t>(J - J_min)] = parareal_factor(r, J, scheme);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, J_max - J_min + 1);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

int threshold_from_table(const std::vector<FactorReport>& table, double gamma) {
  if (table.empty() || table.back().phi > gamma) {
    throw NoThreshold("no J up to " + std::to_string(table.empty() ? 0 : table.back().J) +
                      " reaches factor <= " + std::to_string(gamma));
  }
  int j_star = table.back().J;
  for (auto it = table.rbegin(); it != table.rend() && it->phi <= gamma; ++it) j_star = it->J;
  return j_star;
}

ThresholdReport find_threshold(const RationalFn& r, double gamma, int J_max, int J_min,
                               const std::string& scheme, int threads) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  ThresholdReport rep;
  rep.gamma = gamma;
  rep.table = factor_table(r, J_min, J_max, scheme, threads);
  rep.j_star = threshold_from_table(rep.table, gamma);
  return rep;
}

SandwichReport sandwich_check(const RationalFn& r, double alpha, double beta, double s_star,
                              int points) {
  if (!(alpha > 0.0 && alpha < beta) || !(s_star > 0.0) || points < 1) {
    throw DomainError("sandwich_check requires 0 < alpha < beta and s_star > 0");
  }
  SandwichReport rep{true, std::numeric_limits<double>::infinity(), 0.0};
  for (int k = 1; k <= points; ++k) {
    const double s = s_star * k / points;
    const double v = r(-s);
    const double margin = std::min(v - std::exp(-beta * s), std::exp(-alpha * s) - v);
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_s = s;
    }
  }
  rep.pass = rep.worst_margin >= 0.0;
  return rep;
}

TailReport tail_sup(const RationalFn& r, double s_from, int points) {
  if (!(s_from > 0.0) || s_from >= 1e8 || points < 2) throw DomainError("tail_sup: bad range");
  TailReport rep{std::abs(r.value_at_infinity()), std::numeric_limits<double>::infinity()};
  for (double s : log_grid(s_from, 1e8, points)) {
    const double v = std::abs(r(-s));
    if (v > rep.sup) {
      rep.sup = v;
      rep.argsup_s = s;
    }
  }
  return rep;
}

}  // namespace pint
