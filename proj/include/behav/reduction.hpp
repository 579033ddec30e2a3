#pragma once

#include "behav/laurent.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace behav {

/// U * M = T with U unimodular and T in row staircase form.
struct ReducedForm {
  PolyMatrix U;
  PolyMatrix T;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

/// Exact determinant by cofactor expansion along the first row.
inline LaurentPoly det(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("det: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // Minors indexed by the bitmask of surviving columns; rows are consumed in
  // order, so the row of a minor is implied by the mask's popcount.
  std::vector<std::optional<LaurentPoly>> memo(std::size_t{1} << n);
  auto minor = [&](auto&& self, unsigned mask) -> LaurentPoly {
    if (mask == 0) return 1;
    if (memo[mask]) return *memo[mask];
    const std::size_t row = n - static_cast<std::size_t>(__builtin_popcount(mask));
    LaurentPoly sum;
    int sign = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (1u << j))) continue;
      if (!m(row, j).is_zero()) {
        LaurentPoly term = m(row, j) * self(self, mask & ~(1u << j));
        if (sign > 0) sum += term;
        else sum -= term;
      }
      sign = -sign;
    }
    memo[mask] = sum;
    return sum;
  };
  return minor(minor, (1u << n) - 1);
}

namespace detail {

/// The unit c*s^k turning p into a polynomial with lowest power s^0 and
/// constant term 1.
inline LaurentPoly normalizing_unit(const LaurentPoly& p) {
  return LaurentPoly::monomial(Rational(1) / p.trailing_coeff(), -*p.min_degree());
}

}  // namespace detail

/// Unimodular row reduction to staircase (upper-triangular) form.
///
/// Columns are processed left to right. Within a column the nonzero entry of
/// smallest degree span (ties: lowest row) becomes the pivot candidate; it is
/// normalized to lowest power s^0 with constant term 1 and every other entry
/// below it is replaced by its division remainder, which has strictly smaller
/// span. This repeats until the candidate is alone in the column.
inline ReducedForm reduce(const PolyMatrix& m) {
  ReducedForm out{PolyMatrix::identity(m.rows()), m, 0, {}};
  PolyMatrix& U = out.U;
  PolyMatrix& T = out.T;
  std::size_t row = 0;
  for (std::size_t col = 0; col < T.cols() && row < T.rows(); ++col) {
    bool has_pivot = false;
    for (;;) {
      std::optional<std::size_t> best;
      int best_span = 0;
      std::size_t nonzero = 0;
      for (std::size_t i = row; i < T.rows(); ++i) {
        if (T(i, col).is_zero()) continue;
        ++nonzero;
        int span = *T(i, col).span();
        if (!best || span < best_span) {
          best = i;
          best_span = span;
        }
      }
      if (!best) break;
      T.swap_rows(row, *best);
      U.swap_rows(row, *best);
      const LaurentPoly unit = detail::normalizing_unit(T(row, col));
      T.scale_row(row, unit);
      U.scale_row(row, unit);
      has_pivot = true;
      if (nonzero == 1) break;
      const LaurentPoly pivot = T(row, col);
      for (std::size_t i = row + 1; i < T.rows(); ++i) {
        if (T(i, col).is_zero()) continue;
        auto [quotient, rem] = divide_with_remainder(T(i, col), pivot);
        T.add_row_multiple(i, row, -quotient);
        U.add_row_multiple(i, row, -quotient);
      }
    }
    if (has_pivot) {
      out.pivot_cols.push_back(col);
      ++row;
    }
  }
  out.rank = row;
  return out;
}

inline std::size_t rank(const PolyMatrix& m) { return reduce(m).rank; }

/// cols - rank: the number of freely choosable kernel coordinates.
inline std::size_t kernel_rank_deficit(const PolyMatrix& m) {
  return m.cols() - rank(m);
}

/// True iff every row below the rank is zero and each pivot row starts at its
/// pivot column with pivot columns strictly increasing.
inline bool is_staircase(const ReducedForm& r) {
  const PolyMatrix& T = r.T;
  if (r.pivot_cols.size() != r.rank) return false;
  for (std::size_t i = 0; i < T.rows(); ++i) {
    if (i >= r.rank) {
      if (!T.row_is_zero(i)) return false;
      continue;
    }
    const std::size_t p = r.pivot_cols[i];
    if (i > 0 && p <= r.pivot_cols[i - 1]) return false;
    if (T(i, p).is_zero()) return false;
    for (std::size_t j = 0; j < p; ++j)
      if (!T(i, j).is_zero()) return false;
    for (std::size_t k = i + 1; k < T.rows(); ++k)
      if (!T(k, p).is_zero()) return false;
  }
  return true;
}

/// Solves W * T = P for W, given T in staircase form with `rank` nonzero rows
/// and the listed pivot columns. Returns none when no Laurent-polynomial W
/// exists. Rows of W beyond the rank are set to zero.
inline std::optional<PolyMatrix> left_quotient(
    const PolyMatrix& P, const PolyMatrix& T,
    const std::vector<std::size_t>& pivot_cols) {
  if (P.cols() != T.cols()) throw DimensionError("left_quotient: column mismatch");
  PolyMatrix W(P.rows(), T.rows());
  for (std::size_t i = 0; i < P.rows(); ++i) {
    std::vector<LaurentPoly> residual(P.cols());
    for (std::size_t j = 0; j < P.cols(); ++j) residual[j] = P(i, j);
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
      const std::size_t c = pivot_cols[r];
      auto factor = divide_exact(residual[c], T(r, c));
      if (!factor) return std::nullopt;
      W(i, r) = *factor;
      for (std::size_t j = 0; j < P.cols(); ++j)
        residual[j] -= *factor * T(r, j);
    }
    for (const auto& p : residual)
      if (!p.is_zero()) return std::nullopt;
  }
  return W;
}

}  // namespace behav
