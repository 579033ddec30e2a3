#pragma once

#include "behav/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace behav {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Laurent polynomial in the shift indeterminate s (forward shift) with exact
/// rational coefficients. Only nonzero coefficients are stored; the zero
/// polynomial has no terms and no degree.
class LaurentPoly {
 public:
  using Terms = std::map<int, Rational>;

  LaurentPoly() = default;
  LaurentPoly(int constant) : LaurentPoly(Rational(constant)) {}  // NOLINT
  LaurentPoly(const Rational& constant) {                         // NOLINT
    if (constant != 0) terms_.emplace(0, constant);
  }
  LaurentPoly(std::initializer_list<std::pair<const int, Rational>> terms) {
    for (const auto& [degree, coeff] : terms) add_term(degree, coeff);
  }

  static LaurentPoly monomial(const Rational& coeff, int degree) {
    LaurentPoly p;
    p.add_term(degree, coeff);
    return p;
  }
  /// The forward shift s.
  static LaurentPoly shift() { return monomial(1, 1); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  std::optional<int> min_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
  }
  std::optional<int> max_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
  }
  /// max_degree - min_degree; none for the zero polynomial.
  std::optional<int> span() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first - terms_.begin()->first;
  }

  Rational coeff(int degree) const {
    auto it = terms_.find(degree);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  /// Coefficient of the highest power; requires a nonzero polynomial.
  const Rational& leading_coeff() const { return terms_.rbegin()->second; }
  /// Coefficient of the lowest power; requires a nonzero polynomial.
  const Rational& trailing_coeff() const { return terms_.begin()->second; }

  void add_term(int degree, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(degree, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Value at s = 1, i.e. the sum of all coefficients. This is the gain of the
  /// operator on constant trajectories.
  Rational at_one() const {
    Rational sum = 0;
    for (const auto& [degree, coeff] : terms_) sum += coeff;
    return sum;
  }

  /// p(s) -> p(s^-1).
  LaurentPoly reflected() const {
    LaurentPoly out;
    for (const auto& [degree, coeff] : terms_) out.terms_.emplace(-degree, coeff);
    return out;
  }

  /// Multiplication by s^k.
  LaurentPoly shifted(int k) const {
    LaurentPoly out;
    for (const auto& [degree, coeff] : terms_)
      out.terms_.emplace(degree + k, coeff);
    return out;
  }

  LaurentPoly& operator+=(const LaurentPoly& other) {
    for (const auto& [degree, coeff] : other.terms_) add_term(degree, coeff);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& other) {
    for (const auto& [degree, coeff] : other.terms_) add_term(degree, -coeff);
    return *this;
  }
  LaurentPoly& operator*=(const Rational& scalar) {
    if (scalar == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [degree, coeff] : terms_) coeff *= scalar;
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    return a += b;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) {
    return a -= b;
  }
  friend LaurentPoly operator-(LaurentPoly a) {
    for (auto& [degree, coeff] : a.terms_) coeff = -coeff;
    return a;
  }
  friend LaurentPoly operator*(LaurentPoly a, const Rational& s) {
    return a *= s;
  }
  friend LaurentPoly operator*(const Rational& s, LaurentPoly a) {
    return a *= s;
  }
  /// Convolution of coefficient maps.
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [da, ca] : a.terms_)
      for (const auto& [db, cb] : b.terms_) out.add_term(da + db, ca * cb);
    return out;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }

 private:
  Terms terms_;
};

inline LaurentPoly poly_mul(const LaurentPoly& p, const LaurentPoly& q) {
  return p * q;
}

/// True iff p is a unit of the Laurent ring, i.e. c*s^k with c != 0.
inline bool unit_test(const LaurentPoly& p) { return p.term_count() == 1; }

/// Division with remainder of `a` by a nonzero `b`, both read as ordinary
/// polynomials after shifting their lowest power to s^0. Returns (q, r) with
/// a = q*b + r and span(r) < span(b) (or r = 0).
inline std::pair<LaurentPoly, LaurentPoly> divide_with_remainder(
    const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return {LaurentPoly{}, LaurentPoly{}};
  const int b_lo = *b.min_degree();
  const int b_hi = *b.max_degree();
  const int a_lo = *a.min_degree();
  LaurentPoly quotient;
  LaurentPoly rem = a;
  // Eliminate from the top while the remainder reaches b's span above a_lo.
  while (!rem.is_zero() && *rem.max_degree() - a_lo >= b_hi - b_lo) {
    const int shift = *rem.max_degree() - b_hi;
    const Rational factor = rem.leading_coeff() / b.leading_coeff();
    quotient.add_term(shift, factor);
    rem -= b.shifted(shift) * factor;
  }
  return {quotient, rem};
}

/// Exact quotient a / b in the Laurent ring, if it exists.
inline std::optional<LaurentPoly> divide_exact(const LaurentPoly& a,
                                               const LaurentPoly& b) {
  auto [quotient, rem] = divide_with_remainder(a, b);
  if (!rem.is_zero()) return std::nullopt;
  return quotient;
}

/// Renders with `s` for the forward shift and `s^-k` for delays, highest power
/// first: `s^2 - s + 1`, `1 - s^-1 - s^-2`, `1/2*s^3`.
inline std::string to_string(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [degree, coeff] = *it;
    Rational magnitude = abs(coeff);
    if (first) {
      if (coeff < 0) out += "-";
    } else {
      out += coeff < 0 ? " - " : " + ";
    }
    first = false;
    if (degree == 0) {
      out += to_string(magnitude);
      continue;
    }
    if (magnitude != 1) out += to_string(magnitude) + "*";
    out += "s";
    if (degree != 1) out += "^" + std::to_string(degree);
  }
  return out;
}

/// Dense matrix of Laurent polynomials.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  PolyMatrix(std::initializer_list<std::initializer_list<LaurentPoly>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionError("ragged matrix literal");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static PolyMatrix identity(std::size_t n) {
    PolyMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  /// Lifts a constant rational matrix (row-major nested vectors).
  static PolyMatrix constant(const std::vector<std::vector<Rational>>& values) {
    PolyMatrix m(values.size(), values.empty() ? 0 : values.front().size());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (values[i].size() != m.cols())
        throw DimensionError("ragged constant matrix");
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = values[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  LaurentPoly& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const LaurentPoly& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const LaurentPoly& p) { return p.is_zero(); });
  }
  bool row_is_zero(std::size_t i) const {
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero()) return false;
    return true;
  }

  std::optional<int> min_degree() const {
    std::optional<int> out;
    for (const auto& p : entries_)
      if (auto d = p.min_degree()) out = out ? std::min(*out, *d) : *d;
    return out;
  }
  std::optional<int> max_degree() const {
    std::optional<int> out;
    for (const auto& p : entries_)
      if (auto d = p.max_degree()) out = out ? std::max(*out, *d) : *d;
    return out;
  }

  /// Coefficient matrix of s^degree.
  std::vector<std::vector<Rational>> coefficient(int degree) const {
    std::vector<std::vector<Rational>> out(rows_,
                                           std::vector<Rational>(cols_, 0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).coeff(degree);
    return out;
  }
  /// M(1): the action on constant trajectories.
  std::vector<std::vector<Rational>> at_one() const {
    std::vector<std::vector<Rational>> out(rows_,
                                           std::vector<Rational>(cols_, 0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).at_one();
    return out;
  }

  PolyMatrix transposed() const {
    PolyMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  PolyMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
                   std::size_t ncols) const {
    if (row0 + nrows > rows_ || col0 + ncols > cols_)
      throw DimensionError("block out of range");
    PolyMatrix out(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < ncols; ++j)
        out(i, j) = (*this)(row0 + i, col0 + j);
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }
  /// row[target] += factor * row[source]
  void add_row_multiple(std::size_t target, std::size_t source,
                        const LaurentPoly& factor) {
    for (std::size_t j = 0; j < cols_; ++j)
      (*this)(target, j) += factor * (*this)(source, j);
  }
  void scale_row(std::size_t i, const LaurentPoly& factor) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = factor * (*this)(i, j);
  }

  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw DimensionError("matrix sum: shape mismatch");
    PolyMatrix out = a;
    for (std::size_t k = 0; k < out.entries_.size(); ++k)
      out.entries_[k] += b.entries_[k];
    return out;
  }
  friend PolyMatrix operator-(const PolyMatrix& a) {
    PolyMatrix out = a;
    for (auto& p : out.entries_) p = -p;
    return out;
  }

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("matrix product: " + std::to_string(a.rows_) + "x" +
                           std::to_string(a.cols_) + " times " +
                           std::to_string(b.rows_) + "x" +
                           std::to_string(b.cols_));
    PolyMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const auto& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) out(i, j) += aik * b(k, j);
      }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<LaurentPoly> entries_;
};

inline PolyMatrix mat_mul(const PolyMatrix& a, const PolyMatrix& b) {
  return a * b;
}

/// The adjoint shift operator: transpose with s <-> s^-1.
inline PolyMatrix adjoint(const PolyMatrix& m) {
  PolyMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j).reflected();
  return out;
}

/// [a b]; either side may have zero columns.
inline PolyMatrix hstack(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw DimensionError("hstack: row count mismatch");
  PolyMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

/// [a; b]; either side may have zero rows.
inline PolyMatrix vstack(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw DimensionError("vstack: column count mismatch");
  PolyMatrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

/// One row per line, entries separated by ` | `.
inline std::string to_string(const PolyMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += " | ";
      out += to_string(m(i, j));
    }
    out += "\n";
  }
  return out;
}

}  // namespace behav
