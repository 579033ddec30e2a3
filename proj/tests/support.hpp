// Shared test fixtures: paper systems, random generators, and brute-force
// oracles. The oracles use plain int64 arithmetic and direct definitions so
// they stay independent of the library code they check.
#pragma once

#include "behav/feasibility.hpp"
#include "behav/laurent.hpp"
#include "behav/model.hpp"
#include "behav/model_io.hpp"
#include "behav/trajectory.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace behav::testing {

inline const LaurentPoly s = LaurentPoly::shift();
inline const LaurentPoly s_inv = LaurentPoly::monomial(1, -1);

inline std::string models_dir() { return BEHAV_MODELS_DIR; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline BehavioralSystem load_model(const std::string& name) {
  return parse_model(slurp(models_dir() + "/" + name));
}

/// (s^2 - s + 1) w <= 2
inline BehavioralSystem example1() {
  BehavioralSystem sys;
  sys.q = 1;
  sys.H = PolyMatrix{{s * s - s + 1}};
  sys.g = Trajectory::constant({2});
  return sys;
}

/// [[s+1, 1], [1, s]] w <= (15, 10)
inline BehavioralSystem example2() {
  BehavioralSystem sys;
  sys.q = 2;
  sys.H = PolyMatrix{{s + 1, 1}, {1, s}};
  sys.g = Trajectory::constant({15, 10});
  return sys;
}

/// Unstable x1 dynamics with box constraints: infeasible.
inline BehavioralSystem example4() {
  BehavioralSystem sys;
  sys.q = 3;
  sys.R = PolyMatrix{{s - 2, 0, 0}, {-1, s + 1, -1}};
  sys.d = Trajectory::constant({0, 0});
  sys.H = PolyMatrix{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  sys.g = Trajectory::constant({5, -1, 5, 5, 1, 1});
  sys.variable_names = {"x1", "x2", "u"};
  return sys;
}

/// Hand-derived Example-4 certificate: y1 = -d(-1) - 2d(-2) - 4d(-3), y2 = 0,
/// z1 = d(0), z2 = 8 d(-3), objective 5 - 8 = -3.
inline Certificate example4_certificate() {
  std::vector<Vector> y_rows(4, Vector(2, 0));
  std::vector<Vector> z_rows(4, Vector(6, 0));
  // window [-3, 0]
  y_rows[0][0] = -4;  // k = -3
  y_rows[1][0] = -2;  // k = -2
  y_rows[2][0] = -1;  // k = -1
  z_rows[3][0] = 1;   // z1 at k = 0
  z_rows[0][1] = 8;   // z2 at k = -3
  return {Trajectory::finite_support(-3, y_rows), Trajectory::finite_support(-3, z_rows), -3};
}

// ---------------------------------------------------------------------------
// Random generation

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine); }
  Rational rational(int lo, int hi, int max_den = 1) {
    const int num = uniform(lo, hi);
    const int den = uniform(1, max_den);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
};

inline LaurentPoly random_poly(Rng& rng, int min_deg, int max_deg, int coeff = 3,
                               double density = 0.6, int max_den = 1) {
  LaurentPoly p;
  for (int d = min_deg; d <= max_deg; ++d)
    if (rng.coin(density)) p.add_term(d, rng.rational(-coeff, coeff, max_den));
  return p;
}

inline PolyMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                int min_deg = -1, int max_deg = 1, int coeff = 3,
                                double density = 0.6) {
  PolyMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = random_poly(rng, min_deg, max_deg, coeff, density);
  return m;
}

inline Trajectory random_finite(Rng& rng, std::size_t dim, int max_len = 5, int coeff = 4) {
  const int first = rng.uniform(-4, 4);
  const int len = rng.uniform(1, max_len);
  std::vector<Vector> rows;
  for (int k = 0; k < len; ++k) {
    Vector v(dim);
    for (auto& x : v) x = rng.rational(-coeff, coeff, 2);
    rows.push_back(std::move(v));
  }
  return Trajectory::finite_support(first, std::move(rows));
}

/// Product of random elementary unimodular operations.
inline PolyMatrix random_unimodular(Rng& rng, std::size_t n, int ops = 4) {
  PolyMatrix u = PolyMatrix::identity(n);
  for (int t = 0; t < ops; ++t) {
    const int kind = rng.uniform(0, 2);
    const auto a = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 1));
    const auto b = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 1));
    if (kind == 0) {
      u.swap_rows(a, b);
    } else if (kind == 1) {
      int c = rng.uniform(1, 3) * (rng.coin() ? 1 : -1);
      u.scale_row(a, LaurentPoly::monomial(c, rng.uniform(-1, 1)));
    } else if (a != b) {
      u.add_row_multiple(a, b, random_poly(rng, -1, 1, 2));
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// Brute-force oracles

/// Generic rank over Q(s): the largest rank of M(s0) over several rational
/// evaluation points, by int-free fraction Gaussian elimination.
inline std::size_t rank_by_evaluation(const PolyMatrix& m) {
  std::size_t best = 0;
  for (int point : {2, 3, 5, 7, -11, 13}) {
    std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        Rational v = 0;
        for (const auto& [deg, c] : m(i, j).terms()) {
          Rational p = 1;
          for (int e = 0; e < std::abs(deg); ++e) p *= point;
          v += deg >= 0 ? Rational(c * p) : Rational(c / p);
        }
        a[i][j] = v;
      }
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
      std::size_t piv = r;
      while (piv < m.rows() && a[piv][c] == 0) ++piv;
      if (piv == m.rows()) continue;
      std::swap(a[piv], a[r]);
      for (std::size_t i = r + 1; i < m.rows(); ++i) {
        Rational f = a[i][c] / a[r][c];
        for (std::size_t j = c; j < m.cols(); ++j) a[i][j] -= f * a[r][j];
      }
      ++r;
    }
    best = std::max(best, r);
  }
  return best;
}

/// Small integer system for the exhaustive oracle: rows of polynomials with
/// degrees in [-1, 1], coefficient table coeff[row][col][deg + 1].
struct IntSystem {
  int q = 0;
  int le = 0;  // equalities first
  int li = 0;
  std::vector<std::vector<std::array<int, 3>>> coeff;
  std::vector<int> rhs;

  BehavioralSystem to_behavioral() const {
    BehavioralSystem sys;
    sys.q = static_cast<std::size_t>(q);
    auto block = [&](int first, int count) {
      PolyMatrix m(static_cast<std::size_t>(count), sys.q);
      Vector b;
      for (int r = 0; r < count; ++r) {
        for (int c = 0; c < q; ++c)
          for (int d = -1; d <= 1; ++d)
            m(r, c).add_term(d, coeff[first + r][c][d + 1]);
        b.push_back(rhs[first + r]);
      }
      return std::make_pair(m, Trajectory::constant(b));
    };
    if (le) std::tie(sys.R, sys.d) = block(0, le);
    if (li) std::tie(sys.H, sys.g) = block(le, li);
    return sys;
  }
};

inline IntSystem random_int_system(Rng& rng) {
  IntSystem s;
  s.q = rng.uniform(1, 2);
  const int rows = rng.uniform(1, 3);
  s.le = rows > 1 && rng.coin(0.3) ? 1 : 0;
  s.li = rows - s.le;
  s.coeff.assign(rows, std::vector<std::array<int, 3>>(s.q, {0, 0, 0}));
  for (auto& row : s.coeff)
    for (auto& entry : row)
      for (auto& c : entry)
        if (rng.coin(0.45)) c = rng.uniform(-2, 2);
  for (int r = 0; r < rows; ++r) s.rhs.push_back(rng.uniform(-3, 3));
  return s;
}

enum class OracleAnswer { Feasible, Infeasible, Inconclusive };

/// Constant witnesses in {-3..3}^q.
inline bool oracle_constant_witness(const IntSystem& s) {
  std::vector<int> w(static_cast<std::size_t>(s.q), -3);
  for (;;) {
    bool ok = true;
    for (int r = 0; r < s.le + s.li && ok; ++r) {
      long long lhs = 0;
      for (int c = 0; c < s.q; ++c)
        lhs += static_cast<long long>(s.coeff[r][c][0] + s.coeff[r][c][1] + s.coeff[r][c][2]) * w[c];
      ok = r < s.le ? lhs == s.rhs[r] : lhs <= s.rhs[r];
    }
    if (ok) return true;
    std::size_t i = 0;
    while (i < w.size() && w[i] == 3) w[i++] = -3;
    if (i == w.size()) return false;
    ++w[i];
  }
}

/// Exhaustive depth-first search for integer duals on [-3, 3]: y in {-1,0,1},
/// z in {0,1,2}. The dual equation for column c at time t is
///   sum_r sum_d coeff[r][c][d] * lambda_r(t - d) = 0,
/// which only involves times t-1..t+1, so it is checked as soon as time t+1
/// is assigned. Returns none when the node budget runs out.
inline std::optional<bool> oracle_dual_exists(const IntSystem& s, long long budget = 400000) {
  const int rows = s.le + s.li;
  constexpr int T = 3;
  constexpr int steps = 2 * T + 1;
  // lambda[time + 1][row], with zero padding at both ends.
  std::vector<std::vector<int>> lambda(steps + 2, std::vector<int>(static_cast<std::size_t>(rows), 0));
  long long nodes = 0;
  auto equation_holds = [&](int slot) {  // time slot - 1 - T in original units
    for (int c = 0; c < s.q; ++c) {
      long long sum = 0;
      for (int r = 0; r < rows; ++r)
        for (int d = -1; d <= 1; ++d) {
          const int src = slot - d;
          if (src < 0 || src > steps + 1) continue;
          sum += static_cast<long long>(s.coeff[r][c][d + 1]) * lambda[src][r];
        }
      if (sum != 0) return false;
    }
    return true;
  };
  auto objective = [&] {
    long long v = 0;
    for (int t = 1; t <= steps; ++t)
      for (int r = 0; r < rows; ++r) v += static_cast<long long>(lambda[t][r]) * s.rhs[r];
    return v;
  };
  bool found = false;
  bool exhausted = false;
  auto dfs = [&](auto&& self, int slot, int row) -> void {
    if (found || exhausted) return;
    if (++nodes > budget) {
      exhausted = true;
      return;
    }
    if (slot > steps) {
      // Equations at the last support slot and one beyond.
      if (equation_holds(steps) && equation_holds(steps + 1) && objective() < 0) found = true;
      return;
    }
    if (row == rows) {
      // Time slot-1 now has all its neighbours assigned.
      if (slot - 1 >= 0 && !equation_holds(slot - 1)) return;
      self(self, slot + 1, 0);
      return;
    }
    const bool is_eq = row < s.le;
    for (int v = is_eq ? -1 : 0; v <= (is_eq ? 1 : 2); ++v) {
      lambda[slot][row] = v;
      self(self, slot, row + 1);
      if (found || exhausted) break;
    }
    lambda[slot][row] = 0;
  };
  dfs(dfs, 1, 0);
  if (found) return true;
  if (exhausted) return std::nullopt;
  return false;
}

/// Conclusive when a constant witness or an integer certificate turns up.
inline OracleAnswer brute_force_oracle(const IntSystem& s) {
  if (oracle_constant_witness(s)) return OracleAnswer::Feasible;
  auto dual = oracle_dual_exists(s);
  if (dual && *dual) return OracleAnswer::Infeasible;
  return OracleAnswer::Inconclusive;
}

}  // namespace behav::testing
