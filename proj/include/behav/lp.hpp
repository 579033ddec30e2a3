#pragma once

#include "behav/rational.hpp"
#include "behav/laurent.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace behav::lp {

enum class Sense { Minimize, Maximize };
enum class Rel { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<Rational> coeffs;  // one per variable
  Rel rel = Rel::LessEqual;
  Rational rhs = 0;
};

/// Linear program over rational data. Variables are nonnegative unless marked
/// free.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<bool> free_vars;  // empty means all nonnegative
  std::vector<Constraint> constraints;
  std::vector<Rational> objective;  // empty means the zero objective
  Sense sense = Sense::Minimize;

  std::size_t add_constraint(std::vector<Rational> coeffs, Rel rel, Rational rhs) {
    if (coeffs.size() != num_vars)
      throw DimensionError("lp constraint has wrong number of coefficients");
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
    return constraints.size() - 1;
  }
};

struct Optimal {
  std::vector<Rational> point;
  Rational value;
};
struct Infeasible {};
struct Unbounded {};

using Result = std::variant<Optimal, Infeasible, Unbounded>;

namespace detail {

/// Dense simplex tableau over equality rows with nonnegative columns.
/// Entering and leaving variables follow the least-index rule, which rules out
/// cycling.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows, std::vector<Rational>(cols + 1, 0)),
        basis_(rows, 0) {}

  Rational& at(std::size_t i, std::size_t j) { return a_[i][j]; }
  Rational& rhs(std::size_t i) { return a_[i][cols_]; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return rows_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / a_[r][c];
    for (auto& v : a_[r])
      if (v != 0) v *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || a_[i][c] == 0) continue;
      const Rational f = a_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (a_[r][j] != 0) a_[i][j] -= f * a_[r][j];
    }
    basis_[r] = c;
  }

  /// Minimizes cost^T x over columns marked allowed. Returns false when the
  /// objective is unbounded below.
  bool minimize(const std::vector<Rational>& cost,
                const std::vector<bool>& allowed) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < cols_ && !entering; ++j) {
        if (!allowed[j]) continue;
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < rows_; ++i)
          if (a_[i][j] != 0) reduced -= cost[basis_[i]] * a_[i][j];
        if (reduced < 0) entering = j;
      }
      if (!entering) return true;
      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (a_[i][*entering] <= 0) continue;
        Rational ratio = a_[i][cols_] / a_[i][*entering];
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i) x[basis_[i]] = a_[i][cols_];
    return x;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<Rational>> a_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Exact two-phase simplex.
inline Result solve(const Problem& problem) {
  const std::size_t n = problem.num_vars;
  const std::size_t m = problem.constraints.size();
  auto is_free = [&](std::size_t j) {
    return !problem.free_vars.empty() && problem.free_vars.at(j);
  };
  // Columns: x+ for each variable, x- for free ones, one slack per
  // inequality, one artificial per row.
  std::vector<std::size_t> neg_col(n, 0);
  std::size_t cols = n;
  for (std::size_t j = 0; j < n; ++j)
    if (is_free(j)) neg_col[j] = cols++;
  std::vector<std::size_t> slack_col(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (problem.constraints[i].rel != Rel::Equal) slack_col[i] = cols++;
  const std::size_t structural = cols;
  const std::size_t total = structural + m;

  detail::Tableau tab(m, total);
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& c = problem.constraints[i];
    if (c.coeffs.size() != n)
      throw DimensionError("lp constraint has wrong number of coefficients");
    const bool flip = c.rhs < 0;
    const Rational sign = flip ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (c.coeffs[j] == 0) continue;
      tab.at(i, j) = sign * c.coeffs[j];
      if (is_free(j)) tab.at(i, neg_col[j]) = -sign * c.coeffs[j];
    }
    if (c.rel == Rel::LessEqual) tab.at(i, slack_col[i]) = sign;
    if (c.rel == Rel::GreaterEqual) tab.at(i, slack_col[i]) = -sign;
    tab.rhs(i) = sign * c.rhs;
    tab.at(i, structural + i) = 1;
    tab.basis()[i] = structural + i;
  }

  // Phase I: drive the artificial variables to zero.
  std::vector<Rational> phase1(total, 0);
  for (std::size_t i = 0; i < m; ++i) phase1[structural + i] = 1;
  std::vector<bool> all(total, true);
  tab.minimize(phase1, all);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis()[i] >= structural && tab.rhs(i) != 0) return Infeasible{};
  // Pivot zero-valued artificials out of the basis where possible; rows where
  // that fails are redundant and keep a harmless artificial at zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < structural) continue;
    for (std::size_t j = 0; j < structural; ++j) {
      if (tab.at(i, j) != 0) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase II.
  std::vector<Rational> cost(total, 0);
  if (!problem.objective.empty()) {
    if (problem.objective.size() != n)
      throw DimensionError("lp objective has wrong number of coefficients");
    const Rational sign = problem.sense == Sense::Minimize ? 1 : -1;
    for (std::size_t j = 0; j < n; ++j) {
      cost[j] = sign * problem.objective[j];
      if (is_free(j)) cost[neg_col[j]] = -cost[j];
    }
  }
  std::vector<bool> allowed(total, true);
  for (std::size_t i = 0; i < m; ++i) allowed[structural + i] = false;
  if (!tab.minimize(cost, allowed)) return Unbounded{};

  const auto raw = tab.solution();
  Optimal out;
  out.point.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    out.point[j] = raw[j];
    if (is_free(j)) out.point[j] -= raw[neg_col[j]];
  }
  out.value = 0;
  for (std::size_t j = 0; j < n && !problem.objective.empty(); ++j)
    out.value += problem.objective[j] * out.point[j];
  return out;
}

}  // namespace behav::lp
