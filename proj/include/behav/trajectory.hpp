#pragma once

#include "behav/laurent.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace behav {

using Vector = std::vector<Rational>;

/// How a trajectory continues outside its stored window.
enum class Extension {
  FiniteSupport,  ///< zero outside the window
  QuasiConstant,  ///< a fixed constant vector outside the window
  Periodic,       ///< the window is one period, repeated over all of Z
  Bounded,        ///< undefined outside the window (a finite record)
};

inline const char* to_string(Extension e) {
  switch (e) {
    case Extension::FiniteSupport: return "finite-support";
    case Extension::QuasiConstant: return "quasi-constant";
    case Extension::Periodic: return "periodic";
    case Extension::Bounded: return "bounded";
  }
  return "?";
}

/// Closed integer interval [first, last].
struct Window {
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::int64_t length() const { return last - first + 1; }
  bool contains(std::int64_t k) const { return first <= k && k <= last; }
  friend bool operator==(const Window&, const Window&) = default;
};

/// Vector-valued sequence indexed by Z. Values are stored on a finite window;
/// the extension kind defines everything outside it.
class Trajectory {
 public:
  Trajectory() = default;

  static Trajectory finite_support(std::int64_t first, std::vector<Vector> values) {
    return Trajectory(Extension::FiniteSupport, first, std::move(values), {});
  }
  static Trajectory bounded(std::int64_t first, std::vector<Vector> values) {
    return Trajectory(Extension::Bounded, first, std::move(values), {});
  }
  static Trajectory periodic(std::int64_t first, std::vector<Vector> period) {
    return Trajectory(Extension::Periodic, first, std::move(period), {});
  }
  static Trajectory quasi_constant(Vector constant, std::int64_t first,
                                   std::vector<Vector> values) {
    return Trajectory(Extension::QuasiConstant, first, std::move(values),
                      std::move(constant));
  }
  /// The constant trajectory c over all of Z.
  static Trajectory constant(Vector c) {
    std::vector<Vector> values{c};
    return quasi_constant(std::move(c), 0, std::move(values));
  }
  static Trajectory zero(std::size_t dim) {
    return finite_support(0, {Vector(dim, 0)});
  }
  /// value * e_component at time k, zero elsewhere.
  static Trajectory spike(std::size_t dim, std::size_t component,
                          std::int64_t k, const Rational& value) {
    Vector v(dim, 0);
    v.at(component) = value;
    return finite_support(k, {std::move(v)});
  }
  /// Scalar helpers used throughout the tests and builders.
  static Trajectory scalar_finite_support(std::int64_t first,
                                          const std::vector<Rational>& values) {
    std::vector<Vector> rows;
    for (const auto& v : values) rows.push_back({v});
    return finite_support(first, std::move(rows));
  }
  static Trajectory scalar_bounded(std::int64_t first,
                                   const std::vector<Rational>& values) {
    std::vector<Vector> rows;
    for (const auto& v : values) rows.push_back({v});
    return bounded(first, std::move(rows));
  }

  std::size_t dim() const { return dim_; }
  Extension extension() const { return extension_; }
  Window window() const {
    return {first_, first_ + static_cast<std::int64_t>(values_.size()) - 1};
  }
  const std::vector<Vector>& values() const { return values_; }
  /// Constant part (QuasiConstant) or the zero vector (FiniteSupport).
  const Vector& constant_part() const { return constant_; }
  std::int64_t period() const { return static_cast<std::int64_t>(values_.size()); }

  /// Defined everywhere on Z unless Bounded.
  bool defined_at(std::int64_t k) const {
    return extension_ != Extension::Bounded || window().contains(k);
  }

  /// Value at time k. Throws std::out_of_range where a Bounded trajectory has
  /// no data.
  const Vector& at(std::int64_t k) const {
    const Window w = window();
    if (w.contains(k)) return values_[static_cast<std::size_t>(k - w.first)];
    switch (extension_) {
      case Extension::FiniteSupport:
      case Extension::QuasiConstant:
        return constant_;
      case Extension::Periodic: {
        std::int64_t p = period();
        std::int64_t r = ((k - w.first) % p + p) % p;
        return values_[static_cast<std::size_t>(r)];
      }
      case Extension::Bounded:
        break;
    }
    throw std::out_of_range("trajectory undefined at index " + std::to_string(k));
  }
  const Rational& at(std::int64_t k, std::size_t component) const {
    return at(k)[component];
  }

  /// The scalar sequence of one component, same extension.
  Trajectory component(std::size_t i) const {
    if (i >= dim_) throw DimensionError("component index out of range");
    std::vector<Vector> rows;
    for (const auto& v : values_) rows.push_back({v[i]});
    Trajectory out = *this;
    out.dim_ = 1;
    out.values_ = std::move(rows);
    out.constant_ = {constant_[i]};
    return out;
  }

  /// Restriction to a sub-window, as a Bounded record.
  Trajectory restricted(Window w) const {
    std::vector<Vector> rows;
    for (std::int64_t k = w.first; k <= w.last; ++k) rows.push_back(at(k));
    return bounded(w.first, std::move(rows));
  }

 private:
  Trajectory(Extension ext, std::int64_t first, std::vector<Vector> values,
             Vector constant)
      : extension_(ext), first_(first), values_(std::move(values)) {
    if (values_.empty())
      throw std::invalid_argument("trajectory window must be non-empty");
    dim_ = values_.front().size();
    for (const auto& v : values_)
      if (v.size() != dim_) throw DimensionError("ragged trajectory values");
    if (ext == Extension::QuasiConstant) {
      if (constant.size() != dim_)
        throw DimensionError("constant part dimension mismatch");
      constant_ = std::move(constant);
    } else {
      constant_ = Vector(dim_, 0);
    }
  }

  Extension extension_ = Extension::FiniteSupport;
  std::size_t dim_ = 0;
  std::int64_t first_ = 0;
  std::vector<Vector> values_;
  Vector constant_;
};

namespace detail {

/// Window outside of which the trajectory is periodic with the returned
/// period (FiniteSupport and QuasiConstant are constant there).
inline std::int64_t tail_period(const Trajectory& t) {
  return t.extension() == Extension::Periodic ? t.period() : 1;
}

/// The set of indices on which two trajectories are both defined, reduced to a
/// finite window that decides every pointwise property of the pair: outside
/// it, both sequences repeat values already inside it.
inline std::optional<Window> covering_window(const Trajectory& a,
                                             const Trajectory& b) {
  const bool a_bounded = a.extension() == Extension::Bounded;
  const bool b_bounded = b.extension() == Extension::Bounded;
  if (a_bounded || b_bounded) {
    Window w = a_bounded ? a.window() : b.window();
    if (a_bounded && b_bounded) {
      w.first = std::max(a.window().first, b.window().first);
      w.last = std::min(a.window().last, b.window().last);
      if (w.first > w.last) return std::nullopt;
    }
    return w;
  }
  const std::int64_t lcm = std::lcm(tail_period(a), tail_period(b));
  return Window{std::min(a.window().first, b.window().first) - lcm,
                std::max(a.window().last, b.window().last) + lcm};
}

inline bool has_trivial_perturbation(const Trajectory& t) {
  return std::all_of(t.values().begin(), t.values().end(),
                     [&](const Vector& v) { return v == t.constant_part(); });
}

template <class Op>
Trajectory combine(const Trajectory& a, const Trajectory& b, Op op) {
  if (a.dim() != b.dim()) throw DimensionError("trajectory dimension mismatch");
  auto pointwise = [&](std::int64_t k) {
    const Vector& x = a.at(k);
    const Vector& y = b.at(k);
    Vector out(a.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(x[i], y[i]);
    return out;
  };
  auto sample = [&](Window w) {
    std::vector<Vector> rows;
    for (std::int64_t k = w.first; k <= w.last; ++k) rows.push_back(pointwise(k));
    return rows;
  };
  const Extension ea = a.extension(), eb = b.extension();
  if (ea == Extension::Bounded || eb == Extension::Bounded) {
    auto w = covering_window(a, b);
    if (!w) throw std::invalid_argument("trajectories have disjoint windows");
    return Trajectory::bounded(w->first, sample(*w));
  }
  const bool a_periodic = ea == Extension::Periodic;
  const bool b_periodic = eb == Extension::Periodic;
  if (a_periodic || b_periodic) {
    if ((!a_periodic && !has_trivial_perturbation(a)) ||
        (!b_periodic && !has_trivial_perturbation(b)))
      throw std::invalid_argument(
          "periodic trajectory combined with a finite perturbation is not "
          "representable");
    const Trajectory& anchor = a_periodic ? a : b;
    const std::int64_t p = std::lcm(tail_period(a), tail_period(b));
    return Trajectory::periodic(anchor.window().first,
                                sample({anchor.window().first,
                                        anchor.window().first + p - 1}));
  }
  Window w{std::min(a.window().first, b.window().first),
           std::max(a.window().last, b.window().last)};
  if (ea == Extension::FiniteSupport && eb == Extension::FiniteSupport)
    return Trajectory::finite_support(w.first, sample(w));
  Vector constant(a.dim());
  for (std::size_t i = 0; i < constant.size(); ++i)
    constant[i] = op(a.constant_part()[i], b.constant_part()[i]);
  return Trajectory::quasi_constant(std::move(constant), w.first, sample(w));
}

}  // namespace detail

inline Trajectory operator+(const Trajectory& a, const Trajectory& b) {
  return detail::combine(a, b, [](const Rational& x, const Rational& y) {
    return Rational(x + y);
  });
}
inline Trajectory operator-(const Trajectory& a, const Trajectory& b) {
  return detail::combine(a, b, [](const Rational& x, const Rational& y) {
    return Rational(x - y);
  });
}
inline Trajectory operator*(const Rational& s, const Trajectory& t) {
  return detail::combine(t, t, [&](const Rational& x, const Rational&) {
    return Rational(s * x);
  });
}

/// Pointwise equality on the common domain; both must have the same domain.
inline bool equivalent(const Trajectory& a, const Trajectory& b) {
  if (a.dim() != b.dim()) return false;
  const bool ab = a.extension() == Extension::Bounded;
  const bool bb = b.extension() == Extension::Bounded;
  if (ab != bb || (ab && a.window() != b.window())) return false;
  auto w = detail::covering_window(a, b);
  for (std::int64_t k = w->first; k <= w->last; ++k)
    if (a.at(k) != b.at(k)) return false;
  return true;
}

/// Vertical concatenation [a; b] of two finitely supported trajectories.
inline Trajectory stack(const Trajectory& a, const Trajectory& b) {
  if (a.extension() != Extension::FiniteSupport ||
      b.extension() != Extension::FiniteSupport)
    throw std::invalid_argument("stack requires finitely supported operands");
  Window w{std::min(a.window().first, b.window().first),
           std::max(a.window().last, b.window().last)};
  std::vector<Vector> rows;
  for (std::int64_t k = w.first; k <= w.last; ++k) {
    Vector v = a.at(k);
    const Vector& tail = b.at(k);
    v.insert(v.end(), tail.begin(), tail.end());
    rows.push_back(std::move(v));
  }
  return Trajectory::finite_support(w.first, std::move(rows));
}

/// (M w)(k) = sum_i M_i w(k + i).
///
/// FiniteSupport and QuasiConstant results widen the window by the degree
/// span; Periodic keeps the period; Bounded keeps only interior indices, where
/// every shifted read lands inside the input window.
inline Trajectory apply(const PolyMatrix& m, const Trajectory& w) {
  if (m.cols() != w.dim())
    throw DimensionError("apply: matrix has " + std::to_string(m.cols()) +
                         " columns, trajectory has dimension " +
                         std::to_string(w.dim()));
  const std::int64_t lo = m.min_degree().value_or(0);
  const std::int64_t hi = m.max_degree().value_or(0);
  auto value = [&](std::int64_t k) {
    Vector out(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        for (const auto& [degree, coeff] : m(i, j).terms())
          out[i] += coeff * w.at(k + degree, j);
    return out;
  };
  auto sample = [&](std::int64_t first, std::int64_t last) {
    std::vector<Vector> rows;
    for (std::int64_t k = first; k <= last; ++k) rows.push_back(value(k));
    return rows;
  };
  const Window win = w.window();
  switch (w.extension()) {
    case Extension::FiniteSupport:
      return Trajectory::finite_support(win.first - hi,
                                        sample(win.first - hi, win.last - lo));
    case Extension::QuasiConstant: {
      const auto gain = m.at_one();
      Vector constant(m.rows(), 0);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
          constant[i] += gain[i][j] * w.constant_part()[j];
      return Trajectory::quasi_constant(std::move(constant), win.first - hi,
                                        sample(win.first - hi, win.last - lo));
    }
    case Extension::Periodic:
      return Trajectory::periodic(win.first, sample(win.first, win.last));
    case Extension::Bounded:
      if (win.first - lo > win.last - hi)
        throw std::invalid_argument(
            "apply: window of length " + std::to_string(win.length()) +
            " is shorter than the operator's degree span");
      return Trajectory::bounded(win.first - lo,
                                 sample(win.first - lo, win.last - hi));
  }
  throw std::logic_error("unreachable");
}

/// sum_k x(k)^T y(k). At least one operand must be finitely supported so the
/// sum is finite.
inline Rational inner_product(const Trajectory& x, const Trajectory& y) {
  if (x.dim() != y.dim()) throw DimensionError("inner product dimension mismatch");
  const Trajectory* finite = nullptr;
  if (x.extension() == Extension::FiniteSupport) finite = &x;
  else if (y.extension() == Extension::FiniteSupport) finite = &y;
  if (!finite)
    throw std::invalid_argument(
        "inner product undefined: neither operand is finitely supported");
  const Trajectory& other = finite == &x ? y : x;
  Rational sum = 0;
  const Window w = finite->window();
  for (std::int64_t k = w.first; k <= w.last; ++k) {
    const Vector& a = finite->at(k);
    if (std::all_of(a.begin(), a.end(), [](const Rational& v) { return v == 0; }))
      continue;
    const Vector& b = other.at(k);
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  }
  return sum;
}

/// Membership in the positive orthant, including the implied values outside
/// the stored window.
inline bool orthant_check(const Trajectory& w) {
  auto nonneg = [](const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x >= 0; });
  };
  if (!std::all_of(w.values().begin(), w.values().end(), nonneg)) return false;
  return nonneg(w.constant_part());
}

enum class Relation { Equal, LessEqual };

/// Checks M w = rhs or M w <= rhs at every index where both sides are defined.
inline bool satisfies(const PolyMatrix& m, const Trajectory& w,
                      const Trajectory& rhs, Relation rel) {
  if (rhs.dim() != m.rows())
    throw DimensionError("satisfies: right-hand side dimension mismatch");
  const Trajectory lhs = apply(m, w);
  auto window = detail::covering_window(lhs, rhs);
  if (!window) return true;
  for (std::int64_t k = window->first; k <= window->last; ++k) {
    const Vector& a = lhs.at(k);
    const Vector& b = rhs.at(k);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (rel == Relation::Equal ? a[i] != b[i] : a[i] > b[i]) return false;
    }
  }
  return true;
}

}  // namespace behav
