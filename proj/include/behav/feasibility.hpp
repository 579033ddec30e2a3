#pragma once

#include "behav/laurent.hpp"
#include "behav/lp.hpp"
#include "behav/model.hpp"
#include "behav/reduction.hpp"
#include "behav/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace behav {

/// Finitely supported dual pair proving infeasibility: z >= 0,
/// [R* H*](y; z) = 0 on all of Z, and <y,d> + <z,g> < 0.
struct Certificate {
  std::optional<Trajectory> y;  // equality multipliers, sign-free
  std::optional<Trajectory> z;  // inequality multipliers, nonnegative
  Rational objective;
};

struct Feasible {
  Trajectory witness;
};
struct Infeasible {
  Certificate certificate;
};
struct Unknown {
  std::vector<int> windows_tried;
  std::vector<int> periods_tried;
  std::string note;
};
using Verdict = std::variant<Feasible, Infeasible, Unknown>;

inline const char* verdict_name(const Verdict& v) {
  if (std::holds_alternative<Feasible>(v)) return "FEASIBLE";
  if (std::holds_alternative<Infeasible>(v)) return "INFEASIBLE";
  return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// Replay checks. These use only trajectory arithmetic and never touch the LP.

inline Rational certificate_objective(const BehavioralSystem& sys,
                                      const Certificate& cert) {
  Rational value = 0;
  if (cert.y) value += inner_product(*cert.y, *sys.d);
  if (cert.z) value += inner_product(*cert.z, *sys.g);
  return value;
}

/// Why a certificate fails, or empty if it is valid.
inline std::string certificate_defect(const BehavioralSystem& sys,
                                      const Certificate& cert) {
  if (cert.y.has_value() != sys.R.has_value())
    return "equality multiplier presence does not match the system";
  if (cert.z.has_value() != sys.H.has_value())
    return "inequality multiplier presence does not match the system";
  if (cert.y && (cert.y->dim() != sys.equality_rows() ||
                 cert.y->extension() != Extension::FiniteSupport))
    return "y must be finitely supported with one component per equality";
  if (cert.z && (cert.z->dim() != sys.inequality_rows() ||
                 cert.z->extension() != Extension::FiniteSupport))
    return "z must be finitely supported with one component per inequality";
  if (cert.z && !orthant_check(*cert.z)) return "z is not nonnegative";
  Trajectory stacked = cert.y && cert.z ? stack(*cert.y, *cert.z)
                                        : (cert.y ? *cert.y : *cert.z);
  const Trajectory image = apply(sys.dual_operator(), stacked);
  const Window w = image.window();
  for (std::int64_t k = w.first; k <= w.last; ++k)
    for (std::size_t i = 0; i < image.dim(); ++i)
      if (image.at(k, i) != 0)
        return "kernel equation " + std::to_string(i + 1) + " fails at k=" +
               std::to_string(k);
  const Rational value = certificate_objective(sys, cert);
  if (value != cert.objective) return "recorded objective does not match";
  if (value >= 0) return "objective is not negative";
  return {};
}

inline bool verify_certificate(const BehavioralSystem& sys, const Certificate& cert) {
  return certificate_defect(sys, cert).empty();
}

/// Membership of w in the behavior.
inline bool verify_witness(const BehavioralSystem& sys, const Trajectory& w) {
  if (w.dim() != sys.q) return false;
  if (sys.R && !satisfies(*sys.R, w, *sys.d, Relation::Equal)) return false;
  if (sys.H && !satisfies(*sys.H, w, *sys.g, Relation::LessEqual)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Searches

/// Farkas certificate with duals supported on [-window, window], if one exists
/// there. Kernel equations are imposed on every index the dual operator can
/// reach, so the certificate is a kernel element on all of Z.
inline std::optional<Certificate> certificate_search(const BehavioralSystem& sys,
                                                     int window) {
  if (window < 1) throw std::invalid_argument("certificate window must be >= 1");
  sys.validate();
  const std::size_t le = sys.equality_rows();
  const std::size_t li = sys.inequality_rows();
  const std::size_t l = le + li;
  const PolyMatrix dual = sys.dual_operator();
  const std::int64_t lo = dual.min_degree().value_or(0);
  const std::int64_t hi = dual.max_degree().value_or(0);
  const std::int64_t first = -window, last = window;
  const std::size_t steps = static_cast<std::size_t>(last - first + 1);
  const std::size_t n = steps * l;
  auto var = [&](std::int64_t k, std::size_t comp) {
    return static_cast<std::size_t>(k - first) * l + comp;
  };

  lp::Problem problem;
  problem.num_vars = n;
  problem.free_vars.assign(n, false);
  for (std::int64_t k = first; k <= last; ++k)
    for (std::size_t c = 0; c < le; ++c) problem.free_vars[var(k, c)] = true;

  // (dual lambda)(t) = sum_deg dual_deg lambda(t + deg); nonzero only for
  // t in [first - hi, last - lo].
  for (std::int64_t t = first - hi; t <= last - lo; ++t) {
    for (std::size_t row = 0; row < dual.rows(); ++row) {
      std::vector<Rational> coeffs(n, 0);
      bool any = false;
      for (std::size_t c = 0; c < l; ++c)
        for (const auto& [degree, coeff] : dual(row, c).terms()) {
          const std::int64_t k = t + degree;
          if (k < first || k > last) continue;
          coeffs[var(k, c)] += coeff;
          any = true;
        }
      if (any) problem.add_constraint(std::move(coeffs), lp::Rel::Equal, 0);
    }
  }
  std::vector<Rational> objective(n, 0);
  for (std::int64_t k = first; k <= last; ++k) {
    for (std::size_t c = 0; c < le; ++c) objective[var(k, c)] = sys.d->at(k, c);
    for (std::size_t c = 0; c < li; ++c) objective[var(k, le + c)] = sys.g->at(k, c);
  }
  problem.add_constraint(objective, lp::Rel::GreaterEqual, -1);
  problem.objective = objective;
  problem.sense = lp::Sense::Minimize;

  const lp::Result result = lp::solve(problem);
  const auto* opt = std::get_if<lp::Optimal>(&result);
  if (!opt || opt->value >= 0) return std::nullopt;

  auto extract = [&](std::size_t offset, std::size_t dim) {
    std::vector<Vector> rows;
    for (std::int64_t k = first; k <= last; ++k) {
      Vector v(dim);
      for (std::size_t c = 0; c < dim; ++c) v[c] = opt->point[var(k, offset + c)];
      rows.push_back(std::move(v));
    }
    return Trajectory::finite_support(first, std::move(rows));
  };
  Certificate cert;
  if (le) cert.y = extract(0, le);
  if (li) cert.z = extract(le, li);
  cert.objective = opt->value;
  return cert;
}

/// Periodic witness with the given period (constant for period 1). The LP
/// uses the constant parts of the right-hand sides; the result is replayed
/// against the full right-hand sides before it is returned.
inline std::optional<Trajectory> witness_search(const BehavioralSystem& sys, int period) {
  if (period < 1) throw std::invalid_argument("witness period must be >= 1");
  sys.validate();
  const std::size_t q = sys.q;
  const std::size_t p = static_cast<std::size_t>(period);
  const std::size_t n = p * q;
  lp::Problem problem;
  problem.num_vars = n;
  problem.free_vars.assign(n, true);
  auto add_rows = [&](const PolyMatrix& m, const Trajectory& rhs, lp::Rel rel) {
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<Rational> coeffs(n, 0);
        for (std::size_t j = 0; j < q; ++j)
          for (const auto& [degree, coeff] : m(i, j).terms()) {
            const std::int64_t shifted = static_cast<std::int64_t>(k) + degree;
            const std::int64_t pp = static_cast<std::int64_t>(p);
            const auto slot = static_cast<std::size_t>(((shifted % pp) + pp) % pp);
            coeffs[slot * q + j] += coeff;
          }
        problem.add_constraint(std::move(coeffs), rel, rhs.constant_part()[i]);
      }
  };
  if (sys.R) add_rows(*sys.R, *sys.d, lp::Rel::Equal);
  if (sys.H) add_rows(*sys.H, *sys.g, lp::Rel::LessEqual);
  const lp::Result result = lp::solve(problem);
  const auto* opt = std::get_if<lp::Optimal>(&result);
  if (!opt) return std::nullopt;
  std::vector<Vector> values;
  for (std::size_t k = 0; k < p; ++k)
    values.emplace_back(opt->point.begin() + static_cast<std::ptrdiff_t>(k * q),
                        opt->point.begin() + static_cast<std::ptrdiff_t>((k + 1) * q));
  Trajectory w = p == 1 ? Trajectory::constant(values.front())
                        : Trajectory::periodic(0, std::move(values));
  if (!verify_witness(sys, w)) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------------------
// Decision procedure

struct Budget {
  std::vector<int> windows{1, 2, 4, 8};
  std::vector<int> periods{1, 2, 4};
  unsigned jobs = 1;
};

/// Windows 1, 2, 4, ... up to and including window_max (if a power of two) or
/// the last power below it followed by window_max itself.
inline std::vector<int> window_schedule(int window_max) {
  std::vector<int> out;
  for (int w = 1; w <= window_max; w *= 2) out.push_back(w);
  if (window_max >= 1 && out.back() != window_max) out.push_back(window_max);
  return out;
}

namespace detail {

struct SearchTask {
  enum class Kind { Witness, Certificate } kind;
  int size;
};

/// Runs tasks on `jobs` threads; returns the verdict of the lowest-indexed task
/// that succeeds, so the answer does not depend on the job count.
inline std::optional<Verdict> run_tasks(const BehavioralSystem& sys,
                                        const std::vector<SearchTask>& tasks,
                                        unsigned jobs) {
  std::vector<std::optional<Verdict>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{tasks.size()};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size() || i > best.load()) return;
      const SearchTask& task = tasks[i];
      if (task.kind == SearchTask::Kind::Witness) {
        if (auto w = witness_search(sys, task.size)) results[i] = Feasible{*w};
      } else {
        if (auto c = certificate_search(sys, task.size)) results[i] = Infeasible{*c};
      }
      if (results[i]) {
        std::size_t current = best.load();
        while (i < current && !best.compare_exchange_weak(current, i)) {
        }
      }
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (best.load() < tasks.size()) return results[best.load()];
  return std::nullopt;
}

}  // namespace detail

/// Feasibility decision. If the dual operator has full column rank its
/// finitely supported kernel is trivial, so no certificate can exist and only
/// witnesses are searched. Otherwise witness and certificate searches are
/// interleaved over the budget. Both kinds of answer are replay-checked.
inline Verdict decide(const BehavioralSystem& sys, const Budget& budget = {}) {
  sys.validate();
  const bool dual_kernel_trivial = kernel_rank_deficit(sys.dual_operator()) == 0;
  std::vector<detail::SearchTask> tasks;
  const std::size_t rounds = std::max(budget.windows.size(), budget.periods.size());
  for (std::size_t r = 0; r < rounds; ++r) {
    if (r < budget.periods.size())
      tasks.push_back({detail::SearchTask::Kind::Witness, budget.periods[r]});
    if (!dual_kernel_trivial && r < budget.windows.size())
      tasks.push_back({detail::SearchTask::Kind::Certificate, budget.windows[r]});
  }
  if (auto verdict = detail::run_tasks(sys, tasks, budget.jobs)) {
    if (auto* f = std::get_if<Feasible>(&*verdict)) {
      if (!verify_witness(sys, f->witness))
        throw std::logic_error("witness search returned an invalid witness");
    } else if (auto* inf = std::get_if<Infeasible>(&*verdict)) {
      if (auto defect = certificate_defect(sys, inf->certificate); !defect.empty())
        throw std::logic_error("certificate search returned an invalid certificate: " +
                               defect);
    }
    return *verdict;
  }
  Unknown unknown;
  unknown.periods_tried = budget.periods;
  if (dual_kernel_trivial) {
    unknown.note =
        "dual operator has full column rank, so no finitely supported "
        "certificate exists; no periodic witness found within budget";
  } else {
    unknown.windows_tried = budget.windows;
    unknown.note = "no certificate or witness found within budget";
  }
  return unknown;
}

}  // namespace behav
