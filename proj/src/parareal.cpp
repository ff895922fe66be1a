#include "pint/parareal.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include "pint/format.hpp"

namespace pint {

const char* to_string(StopRule rule) noexcept {
  return rule == StopRule::FixedIterations ? "fixed" : "tolerance";
}

const char* to_string(InitialGuess guess) noexcept {
  return guess == InitialGuess::CoarseSweep ? "coarse-sweep" : "constant-u0";
}

void PararealConfig::validate() const {
  if (coarse_intervals < 1) throw DomainError("N_c must be at least 1");
  if (J < 1) throw DomainError("J must be at least 1");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (K_max < 1) throw DomainError("K_max must be at least 1");
  if (threads < 1) throw DomainError("threads must be at least 1");
  if (stop == StopRule::Tolerance && !(tolerance > 0.0)) {
    throw DomainError("tolerance must be positive");
  }
}

namespace {

void check_steps(const Propagator& coarse, const Propagator& fine, const PararealConfig& cfg) {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  if (!close(fine.step_size(), cfg.dt)) throw DomainError("fine propagator step differs from dt");
  if (!close(coarse.step_size(), cfg.coarse_step())) {
    throw DomainError("coarse propagator step differs from J * dt");
  }
}

// Calls body(n) for n in [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(int count, int threads, Body body) {
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    for (int n = 0; n < count; ++n) body(n);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  auto worker = [&] {
    for (int n = next++; n < count && !failed; n = next++) {
      try {
        body(n);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

IterationRecord measure(const FemSystem& fem, int k, const std::vector<Vector>& u,
                        const std::vector<StateVector>& reference) {
  IterationRecord rec;
  rec.k = k;
  for (std::size_t n = 1; n < u.size(); ++n) {
    rec.errors.push_back(mass_distance(fem, u[n], reference[n].values));
    rec.max_error = std::max(rec.max_error, rec.errors.back());
  }
  return rec;
}

}  // namespace

std::vector<StateVector> sequential_fine_reference(const Propagator& fine, const Vector& u0,
                                                   const PararealConfig& cfg) {
  cfg.validate();
  std::vector<StateVector> out{{u0, cfg.t0}};
  Vector u = u0;
  for (int n = 0; n < cfg.coarse_intervals; ++n) {
    const double tn = cfg.t0 + n * cfg.coarse_step();
    u = propagate(fine, tn, u, cfg.J);
    out.push_back({u, tn + cfg.coarse_step()});
  }
  return out;
}

IterationHistory run(const FemSystem& fem, const Propagator& coarse, const Propagator& fine,
                     const Vector& u0, const PararealConfig& cfg,
                     std::vector<StateVector> reference) {
  cfg.validate();
  check_steps(coarse, fine, cfg);
  if (reference.empty()) reference = sequential_fine_reference(fine, u0, cfg);
  const int N = cfg.coarse_intervals;
  if (reference.size() != static_cast<std::size_t>(N) + 1) {
    throw DomainError("reference must hold N_c + 1 states");
  }
  auto T = [&](int n) { return cfg.t0 + n * cfg.coarse_step(); };

  // U_k^n and the cached coarse values G(T_n, U_k^n).
  std::vector<Vector> u(static_cast<std::size_t>(N) + 1, u0);
  std::vector<Vector> g(static_cast<std::size_t>(N));
  if (cfg.initial_guess == InitialGuess::CoarseSweep) {
    for (int n = 0; n < N; ++n) {
      g[n] = coarse.advance(T(n), u[n]);
      u[n + 1] = g[n];
    }
  } else {
    for (int n = 0; n < N; ++n) g[n] = coarse.advance(T(n), u0);
  }

  IterationHistory hist;
  hist.iterations.push_back(measure(fem, 0, u, reference));

  std::vector<Vector> fine_end(static_cast<std::size_t>(N));
  for (int k = 0; k < cfg.K_max; ++k) {
    const auto start = std::chrono::steady_clock::now();
    parallel_for(N, cfg.threads, [&](int n) { fine_end[n] = propagate(fine, T(n), u[n], cfg.J); });
    const double sweep_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    std::vector<Vector> next(u.size());
    next[0] = u0;
    for (int n = 0; n < N; ++n) {
      Vector gn = coarse.advance(T(n), next[n]);
      Vector un(gn.size());
      for (std::size_t i = 0; i < un.size(); ++i) un[i] = gn[i] + fine_end[n][i] - g[n][i];
      next[n + 1] = std::move(un);
      g[n] = std::move(gn);
    }

    double change = 0.0;
    for (int n = 1; n <= N; ++n) change = std::max(change, mass_distance(fem, next[n], u[n]));
    u = std::move(next);

    IterationRecord rec = measure(fem, k + 1, u, reference);
    rec.update_norm = change;
    rec.fine_sweep_ms = sweep_ms;
    hist.iterations.push_back(std::move(rec));
    hist.corrections = k + 1;

    if (cfg.stop == StopRule::Tolerance && change <= cfg.tolerance) {
      hist.converged = true;
      break;
    }
  }
  if (cfg.stop == StopRule::FixedIterations) {
    hist.converged = true;
  } else if (!hist.converged) {
    hist.budget_exceeded = true;
  }
  hist.final_iterate = std::move(u);
  return hist;
}

double measured_factor(const IterationHistory& history) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& rec : history.iterations) {
    if (rec.max_error >= 1e-11 && rec.max_error <= 1e-1) {
      pts.emplace_back(rec.k, std::log(rec.max_error));
    }
  }
  if (pts.size() < 4) {
    throw InsufficientData("need at least 4 iterations with error in [1e-11, 1e-1], have " +
                           std::to_string(pts.size()));
  }
  double mk = 0.0, me = 0.0;
  for (const auto& [k, e] : pts) {
    mk += k;
    me += e;
  }
  mk /= static_cast<double>(pts.size());
  me /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [k, e] : pts) {
    sxy += (k - mk) * (e - me);
    sxx += (k - mk) * (k - mk);
  }
  return std::exp(sxy / sxx);
}

std::vector<double> successive_ratios(const IterationHistory& history, double floor) {
  std::vector<double> out;
  const auto& it = history.iterations;
  for (std::size_t k = 1; k < it.size(); ++k) {
    if (it[k].max_error > floor && it[k - 1].max_error > 0.0) {
      out.push_back(it[k].max_error / it[k - 1].max_error);
    }
  }
  return out;
}

void write_history_csv(std::ostream& out, const IterationHistory& history) {
  out << "k,max_error,factor_estimate,fine_sweep_ms\n";
  const auto& it = history.iterations;
  for (std::size_t k = 0; k < it.size(); ++k) {
    out << it[k].k << ',' << format_double(it[k].max_error) << ',';
    if (k > 0 && it[k - 1].max_error > 0.0) out << format_double(it[k].max_error / it[k - 1].max_error);
    out << ',' << format_double(it[k].fine_sweep_ms) << '\n';
  }
}

}  // namespace pint
