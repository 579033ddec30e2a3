#pragma once

#include "behav/laurent.hpp"
#include "behav/trajectory.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace behav {

/// {w : R w = d, H w <= g} with the order taken w.r.t. the positive orthant.
struct BehavioralSystem {
  std::size_t q = 0;
  std::optional<PolyMatrix> R;
  std::optional<Trajectory> d;
  std::optional<PolyMatrix> H;
  std::optional<Trajectory> g;
  std::vector<std::string> variable_names;

  std::size_t equality_rows() const { return R ? R->rows() : 0; }
  std::size_t inequality_rows() const { return H ? H->rows() : 0; }

  /// Name of variable j, falling back to w1, w2, ...
  std::string variable_name(std::size_t j) const {
    if (j < variable_names.size()) return variable_names[j];
    return "w" + std::to_string(j + 1);
  }

  /// Throws DimensionError naming the offending block.
  void validate() const {
    if (!R && !H)
      throw DimensionError("system has neither equalities nor inequalities");
    if (R.has_value() != d.has_value())
      throw DimensionError("[eq] block: R and d must be given together");
    if (H.has_value() != g.has_value())
      throw DimensionError("[ineq] block: H and g must be given together");
    if (R && R->cols() != q)
      throw DimensionError("[eq] block: R has " + std::to_string(R->cols()) +
                           " columns, expected " + std::to_string(q));
    if (H && H->cols() != q)
      throw DimensionError("[ineq] block: H has " + std::to_string(H->cols()) +
                           " columns, expected " + std::to_string(q));
    if (R && d->dim() != R->rows())
      throw DimensionError("[eq] block: right-hand side dimension mismatch");
    if (H && g->dim() != H->rows())
      throw DimensionError("[ineq] block: right-hand side dimension mismatch");
    if (d && d->extension() != Extension::QuasiConstant)
      throw DimensionError("[eq] block: right-hand side must be quasi-constant");
    if (g && g->extension() != Extension::QuasiConstant)
      throw DimensionError("[ineq] block: right-hand side must be quasi-constant");
    if (!variable_names.empty() && variable_names.size() != q)
      throw DimensionError("[vars] block: expected " + std::to_string(q) +
                           " names");
  }

  /// The dual operator [R*(s) H*(s)] whose kernel holds Farkas certificates.
  PolyMatrix dual_operator() const {
    PolyMatrix out(q, 0);
    if (R) out = hstack(out, adjoint(*R));
    if (H) out = hstack(out, adjoint(*H));
    return out;
  }
};

inline bool operator==(const BehavioralSystem& a, const BehavioralSystem& b) {
  auto same_traj = [](const std::optional<Trajectory>& x,
                      const std::optional<Trajectory>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || equivalent(*x, *y);
  };
  return a.q == b.q && a.R == b.R && a.H == b.H && same_traj(a.d, b.d) &&
         same_traj(a.g, b.g) && a.variable_names == b.variable_names;
}

namespace detail {

inline Trajectory stack_quasi_constant(const Trajectory& a, const Trajectory& b) {
  const std::int64_t first = std::min(a.window().first, b.window().first);
  const std::int64_t last = std::max(a.window().last, b.window().last);
  std::vector<Vector> rows;
  for (std::int64_t k = first; k <= last; ++k) {
    Vector v = a.at(k);
    v.insert(v.end(), b.at(k).begin(), b.at(k).end());
    rows.push_back(std::move(v));
  }
  Vector c = a.constant_part();
  c.insert(c.end(), b.constant_part().begin(), b.constant_part().end());
  return Trajectory::quasi_constant(std::move(c), first, std::move(rows));
}

}  // namespace detail

/// H' = [R; -R; H], g' = [d; -d; g]: the mixed system as pure inequalities.
inline std::pair<PolyMatrix, Trajectory> augment_mixed(const BehavioralSystem& sys) {
  sys.validate();
  if (!sys.R) return {*sys.H, *sys.g};
  PolyMatrix h = vstack(*sys.R, -*sys.R);
  Trajectory neg_d = Rational(-1) * *sys.d;
  Trajectory g = detail::stack_quasi_constant(*sys.d, neg_d);
  if (sys.H) {
    h = vstack(h, *sys.H);
    g = detail::stack_quasi_constant(g, *sys.g);
  }
  return {std::move(h), std::move(g)};
}

/// H_s = [H I]: inequality to equality with one slack per row.
inline std::pair<PolyMatrix, Trajectory> augment_slack(const PolyMatrix& h,
                                                       const Trajectory& g) {
  return {hstack(h, PolyMatrix::identity(h.rows())), g};
}

// ---------------------------------------------------------------------------
// Builders

enum class Selector { State, Input, Output, InputRate };

/// F * (selected variable block) <= bound.
struct LinearConstraint {
  Selector selector = Selector::State;
  std::vector<std::vector<Rational>> F;
  Vector bound;
};

/// lower <= v <= upper as the rows [I; -I] with bound [upper; -lower].
inline LinearConstraint box_constraint(Selector selector, const Vector& lower,
                                       const Vector& upper) {
  if (lower.size() != upper.size()) throw DimensionError("box bounds mismatch");
  const std::size_t n = lower.size();
  LinearConstraint c{selector, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> up(n, 0), down(n, 0);
    up[i] = 1;
    down[i] = -1;
    c.F.push_back(up);
    c.bound.push_back(upper[i]);
    c.F.push_back(down);
    c.bound.push_back(-lower[i]);
  }
  return c;
}

/// State-space model x(k+1) = A x + B u, y = C x + D u, with w = (x, u, y).
/// C and D may be empty, in which case the output block is dropped.
struct StateSpace {
  std::vector<std::vector<Rational>> A, B, C, D;
};

inline BehavioralSystem lti_to_behavior(const StateSpace& ss,
                                        const std::vector<LinearConstraint>& constraints) {
  const std::size_t n = ss.A.size();
  const std::size_t m = ss.B.empty() ? 0 : ss.B.front().size();
  const std::size_t p = ss.C.size();
  auto check = [](const std::vector<std::vector<Rational>>& M, std::size_t rows,
                  std::size_t cols, const char* name) {
    if (M.size() != rows)
      throw DimensionError(std::string(name) + " has wrong row count");
    for (const auto& r : M)
      if (r.size() != cols)
        throw DimensionError(std::string(name) + " has wrong column count");
  };
  check(ss.A, n, n, "A");
  check(ss.B, n, m, "B");
  if (p > 0) {
    check(ss.C, p, n, "C");
    if (!ss.D.empty()) check(ss.D, p, m, "D");
  } else if (!ss.D.empty()) {
    throw DimensionError("D given without C");
  }
  const std::size_t q = n + m + p;
  BehavioralSystem sys;
  sys.q = q;
  PolyMatrix R(n + p, q);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) R(i, j) = LaurentPoly(-ss.A[i][j]);
    R(i, i) += LaurentPoly::shift();
    for (std::size_t j = 0; j < m; ++j) R(i, n + j) = LaurentPoly(-ss.B[i][j]);
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j) R(n + i, j) = LaurentPoly(-ss.C[i][j]);
    for (std::size_t j = 0; j < m && !ss.D.empty(); ++j)
      R(n + i, n + j) = LaurentPoly(-ss.D[i][j]);
    R(n + i, n + m + i) = 1;
  }
  sys.R = R;
  sys.d = Trajectory::constant(Vector(n + p, 0));

  PolyMatrix H(0, q);
  Vector g;
  for (const auto& c : constraints) {
    std::size_t offset = 0, width = 0;
    LaurentPoly factor = 1;
    switch (c.selector) {
      case Selector::State: offset = 0; width = n; break;
      case Selector::Input: offset = n; width = m; break;
      case Selector::Output: offset = n + m; width = p; break;
      case Selector::InputRate:
        offset = n;
        width = m;
        factor = LaurentPoly::shift() - LaurentPoly(1);
        break;
    }
    if (width == 0) throw DimensionError("constraint selects an empty block");
    check(c.F, c.bound.size(), width, "constraint F");
    PolyMatrix block(c.F.size(), q);
    for (std::size_t i = 0; i < c.F.size(); ++i)
      for (std::size_t j = 0; j < width; ++j)
        block(i, offset + j) = factor * c.F[i][j];
    H = vstack(H, block);
    g.insert(g.end(), c.bound.begin(), c.bound.end());
  }
  if (H.rows() > 0) {
    sys.H = H;
    sys.g = Trajectory::constant(g);
  }
  for (std::size_t i = 0; i < n; ++i) sys.variable_names.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < m; ++i)
    sys.variable_names.push_back(m == 1 ? "u" : "u" + std::to_string(i + 1));
  for (std::size_t i = 0; i < p; ++i)
    sys.variable_names.push_back(p == 1 ? "y" : "y" + std::to_string(i + 1));
  sys.validate();
  return sys;
}

/// Which equality row the inventory builder emits.
enum class InventoryDynamics {
  StockBalance,  ///< x(k+1) = x(k) + u(k) - d(k): row [s-1, -1, +1]
  AsPrinted,     ///< the commonly printed row [s-1, -1, -1]
};

/// Warehouse model with w = (x, u, d): stock, orders, demand.
inline BehavioralSystem inventory_model(
    InventoryDynamics dynamics = InventoryDynamics::StockBalance) {
  BehavioralSystem sys;
  sys.q = 3;
  const LaurentPoly demand_sign =
      dynamics == InventoryDynamics::StockBalance ? 1 : -1;
  sys.R = PolyMatrix{{LaurentPoly::shift() - LaurentPoly(1), -1, demand_sign}};
  sys.d = Trajectory::constant({0});
  sys.H = PolyMatrix{{-1, -1, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  sys.g = Trajectory::constant({0, 0, 0, 0});
  sys.variable_names = {"x", "u", "d"};
  return sys;
}

/// J = sum_k c(k) u(k) over u's window; c must cover that window.
inline Rational linear_cost(const Trajectory& u, const Trajectory& c) {
  if (u.dim() != 1 || c.dim() != 1)
    throw DimensionError("cost: expected scalar trajectories");
  if (u.extension() != Extension::Bounded &&
      u.extension() != Extension::FiniteSupport)
    throw std::invalid_argument("cost: trajectory must have a finite window");
  Rational sum = 0;
  const Window w = u.window();
  for (std::int64_t k = w.first; k <= w.last; ++k) {
    if (!c.defined_at(k))
      throw std::invalid_argument("cost: weights do not cover index " +
                                  std::to_string(k));
    sum += c.at(k, 0) * u.at(k, 0);
  }
  return sum;
}

}  // namespace behav
