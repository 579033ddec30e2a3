#pragma once

#include "behav/laurent.hpp"
#include "behav/model.hpp"
#include "behav/reduction.hpp"
#include "behav/trajectory.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace behav {

struct RolloutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// coeff * v[column](k + shift)
struct RecurrenceTerm {
  std::size_t column;
  int shift;
  Rational coeff;
};

/// One row of the reduced slack system, read as an update for its pivot
/// variable at time k + lead_shift.
struct RecurrenceRow {
  std::size_t row;
  std::size_t pivot_column;
  int lead_shift;
  Rational lead_coeff;
  std::vector<RecurrenceTerm> terms;  // every term, the lead term included
};

/// The slack-augmented system [H I](w; s) = g after unimodular reduction.
/// Columns 0..q-1 are w, columns q..q+l-1 are the slacks.
struct RecursiveForm {
  PolyMatrix H;
  Trajectory g;
  ReducedForm reduced;
  Trajectory transformed_rhs;  // U g
  std::size_t q = 0;
  std::size_t l = 0;
  std::vector<std::size_t> free_slack_indices;     // slack-relative
  std::vector<std::size_t> free_variable_indices;  // w columns without pivot
  std::vector<RecurrenceRow> rows;

  bool is_slack(std::size_t column) const { return column >= q; }
  bool is_pivot(std::size_t column) const {
    return std::find(reduced.pivot_cols.begin(), reduced.pivot_cols.end(), column) !=
           reduced.pivot_cols.end();
  }
};

inline RecursiveForm build_recursive_form(const PolyMatrix& H, const Trajectory& g) {
  if (g.dim() != H.rows()) throw DimensionError("recursive form: g has wrong dimension");
  if (g.extension() != Extension::QuasiConstant)
    throw std::invalid_argument("recursive form: g must be quasi-constant");
  RecursiveForm form;
  form.H = H;
  form.g = g;
  form.q = H.cols();
  form.l = H.rows();
  const auto [Hs, rhs] = augment_slack(H, g);
  form.reduced = reduce(Hs);
  form.transformed_rhs = apply(form.reduced.U, g);
  for (std::size_t col = 0; col < Hs.cols(); ++col) {
    if (form.is_pivot(col)) continue;
    if (form.is_slack(col)) form.free_slack_indices.push_back(col - form.q);
    else form.free_variable_indices.push_back(col);
  }
  const PolyMatrix& T = form.reduced.T;
  for (std::size_t r = 0; r < form.reduced.rank; ++r) {
    RecurrenceRow row;
    row.row = r;
    row.pivot_column = form.reduced.pivot_cols[r];
    const LaurentPoly& pivot = T(r, row.pivot_column);
    row.lead_shift = *pivot.max_degree();
    row.lead_coeff = pivot.leading_coeff();
    for (std::size_t col = 0; col < T.cols(); ++col)
      for (const auto& [degree, coeff] : T(r, col).terms())
        row.terms.push_back({col, degree, coeff});
    form.rows.push_back(std::move(row));
  }
  return form;
}

inline std::string column_name(const RecursiveForm& form, std::size_t column,
                               const std::vector<std::string>& names = {}) {
  if (form.is_slack(column)) return "s" + std::to_string(column - form.q + 1);
  if (column < names.size()) return names[column];
  return "w" + std::to_string(column + 1);
}

/// Renders each recurrence as `w1(k) + w2(k+1) + s2(k) = 10`.
inline std::string to_string(const RecursiveForm& form,
                             const std::vector<std::string>& names = {}) {
  std::ostringstream out;
  for (const auto& row : form.rows) {
    bool first = true;
    for (const auto& term : row.terms) {
      const Rational magnitude = abs(term.coeff);
      if (first) out << (term.coeff < 0 ? "-" : "");
      else out << (term.coeff < 0 ? " - " : " + ");
      first = false;
      if (magnitude != 1) out << to_string(magnitude) << "*";
      out << column_name(form, term.column, names) << "(k";
      if (term.shift > 0) out << "+" << term.shift;
      if (term.shift < 0) out << term.shift;
      out << ")";
    }
    const Trajectory& rhs = form.transformed_rhs;
    out << " = " << to_string(rhs.constant_part()[row.row]);
    if (!detail::has_trivial_perturbation(rhs))
      out << " (outside k in [" << rhs.window().first << ", " << rhs.window().last
          << "])";
    out << "\n";
  }
  return out.str();
}

/// Times [first, last] at which `column` needs an initial value.
struct FootprintEntry {
  std::size_t column;
  std::int64_t first;
  std::int64_t last;
};

/// Initial values required to start the recurrences at `start`: each pivot
/// variable needs its first lead_shift values, plus any earlier values read by
/// rows above it.
inline std::vector<FootprintEntry> initial_footprint(const RecursiveForm& form,
                                                     std::int64_t start) {
  std::vector<FootprintEntry> out;
  const PolyMatrix& T = form.reduced.T;
  for (const auto& row : form.rows) {
    std::int64_t first = start;
    for (std::size_t r = 0; r < row.row; ++r)
      if (auto lo = T(r, row.pivot_column).min_degree()) first = std::min(first, start + *lo);
    const std::int64_t last = start + row.lead_shift - 1;
    if (first <= last) out.push_back({row.pivot_column, first, last});
  }
  return out;
}

/// (column, time) -> value
using Assignment = std::map<std::pair<std::size_t, std::int64_t>, Rational>;

struct Rollout {
  Trajectory w;      // Bounded on [start, start + horizon]
  Trajectory slack;  // every slack component used, same window
};

/// Solves the recurrences forward from `start`. Free slack components are
/// read from `slack`; free w components from `free_values` (zero when
/// absent). The result is replayed against the original inequality: the
/// residual g - H w must equal the slack on the defined window.
inline Rollout rollout(const RecursiveForm& form, std::int64_t start,
                       const Assignment& initial, const Trajectory& slack,
                       std::int64_t horizon,
                       const std::optional<Trajectory>& free_values = std::nullopt) {
  if (horizon < 0) throw std::invalid_argument("rollout: negative horizon");
  if (slack.dim() != form.l) throw DimensionError("rollout: slack has wrong dimension");
  if (!orthant_check(slack)) throw RolloutError("rollout: slack must be nonnegative");
  if (free_values && free_values->dim() != form.q)
    throw DimensionError("rollout: free values have wrong dimension");

  const auto footprint = initial_footprint(form, start);
  auto in_footprint = [&](std::size_t col, std::int64_t t) {
    return std::any_of(footprint.begin(), footprint.end(), [&](const FootprintEntry& e) {
      return e.column == col && e.first <= t && t <= e.last;
    });
  };
  for (const auto& e : footprint)
    for (std::int64_t t = e.first; t <= e.last; ++t)
      if (!initial.count({e.column, t}))
        throw RolloutError("initial assignment incomplete: missing " +
                           column_name(form, e.column) + "(" + std::to_string(t) + ")");
  for (const auto& [key, value] : initial)
    if (!in_footprint(key.first, key.second))
      throw RolloutError("initial assignment over-determined: " +
                         column_name(form, key.first) + "(" +
                         std::to_string(key.second) + ") is not an initial condition");

  std::map<std::size_t, const RecurrenceRow*> row_of;
  for (const auto& row : form.rows) row_of[row.pivot_column] = &row;
  Assignment known = initial;

  auto value = [&](auto&& self, std::size_t col, std::int64_t t) -> Rational {
    if (auto it = known.find({col, t}); it != known.end()) return it->second;
    auto pivot = row_of.find(col);
    if (pivot == row_of.end()) {
      if (form.is_slack(col)) {
        if (!slack.defined_at(t))
          throw RolloutError("slack window shorter than horizon: no value at k=" +
                             std::to_string(t));
        return slack.at(t, col - form.q);
      }
      if (free_values) {
        if (!free_values->defined_at(t))
          throw RolloutError("free variable values undefined at k=" + std::to_string(t));
        return free_values->at(t, col);
      }
      return 0;
    }
    const RecurrenceRow& row = *pivot->second;
    const std::int64_t k = t - row.lead_shift;
    if (k < start)
      throw RolloutError("row " + std::to_string(row.row + 1) + " cannot determine " +
                         column_name(form, col) + "(" + std::to_string(t) +
                         ") before the start time");
    Rational acc = form.transformed_rhs.at(k, row.row);
    for (const auto& term : row.terms) {
      if (term.column == col && term.shift == row.lead_shift) continue;
      if (term.column < col)
        throw RolloutError("row " + std::to_string(row.row + 1) + " is not causally solvable");
      acc -= term.coeff * self(self, term.column, k + term.shift);
    }
    Rational result = acc / row.lead_coeff;
    known[{col, t}] = result;
    return result;
  };

  const std::int64_t end = start + horizon;
  const std::size_t columns = form.q + form.l;
  std::vector<Vector> w_rows, s_rows;
  for (std::int64_t t = start; t <= end; ++t) {
    for (std::size_t c = columns; c-- > 0;) value(value, c, t);
    Vector w(form.q), s(form.l);
    for (std::size_t c = 0; c < form.q; ++c) w[c] = value(value, c, t);
    for (std::size_t c = 0; c < form.l; ++c) s[c] = value(value, form.q + c, t);
    w_rows.push_back(std::move(w));
    s_rows.push_back(std::move(s));
  }
  Rollout out{Trajectory::bounded(start, std::move(w_rows)),
              Trajectory::bounded(start, std::move(s_rows))};

  // Replay against the original inequality.
  if (!orthant_check(out.slack))
    throw RolloutError("a determined slack component went negative");
  const Trajectory image = apply(form.H, out.w);
  const Window win = image.window();
  for (std::int64_t k = win.first; k <= win.last; ++k)
    for (std::size_t i = 0; i < form.l; ++i)
      if (form.g.at(k, i) - image.at(k, i) != out.slack.at(k, i))
        throw RolloutError("initial conditions are inconsistent with inequality " +
                           std::to_string(i + 1) + " at k=" + std::to_string(k));
  return out;
}

/// s = g - H w; nonnegative exactly when w solves H w <= g.
inline Trajectory residual_slack(const PolyMatrix& H, const Trajectory& g,
                                 const Trajectory& w) {
  return g - apply(H, w);
}

}  // namespace behav
