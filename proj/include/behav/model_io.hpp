#pragma once

#include "behav/laurent.hpp"
#include "behav/model.hpp"
#include "behav/trajectory.hpp"

#include <cctype>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace behav {

/// Syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

/// Cursor over one line of text. Columns are 1-based and offset by `base`.
class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line, std::size_t base = 0)
      : text_(text), line_(line), base_(base) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  std::size_t column() const { return base_ + pos_ + 1; }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column());
  }

  /// Unsigned rational literal: digits, optionally `/digits` or `.digits`.
  Rational number() {
    skip_space();
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t from = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      return pos_ > from;
    };
    if (!digits()) fail("expected a number");
    if (pos_ < text_.size() && (text_[pos_] == '/' || text_[pos_] == '.')) {
      ++pos_;
      if (!digits()) fail("malformed rational literal");
    }
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const std::invalid_argument&) {
      pos_ = start;
      fail("malformed rational literal");
    }
  }

  /// Optionally signed integer.
  long long integer() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits_start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == digits_start) {
      pos_ = start;
      fail("expected an integer");
    }
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  /// Polynomial in `s`: signed terms `c`, `c*s^k`, `s^k`, `c s`.
  LaurentPoly polynomial() {
    LaurentPoly out;
    bool first = true;
    for (;;) {
      int sign = 1;
      if (accept('-')) sign = -1;
      else if (accept('+')) sign = 1;
      else if (!first) break;
      first = false;
      Rational coeff = 1;
      bool has_coeff = false;
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coeff = number();
        has_coeff = true;
        accept('*');
      }
      int degree = 0;
      if (peek() == 's') {
        ++pos_;
        degree = 1;
        if (accept('^')) degree = static_cast<int>(integer());
      } else if (!has_coeff) {
        fail("expected a term");
      }
      out.add_term(degree, sign * coeff);
      c = peek();
      if (c != '+' && c != '-') break;
    }
    return out;
  }

  std::string_view rest() const { return text_.substr(pos_); }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a single polynomial such as `1 - s^-1 - s^-2`.
inline LaurentPoly parse_poly(std::string_view text) {
  detail::Cursor cur(text, 1);
  LaurentPoly p = cur.polynomial();
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return p;
}

/// Matrix literal: entries separated by `|`, rows by `;`.
inline PolyMatrix parse_matrix(std::string_view text) {
  std::vector<std::vector<LaurentPoly>> rows;
  std::size_t offset = 0;
  for (;;) {
    std::size_t end = text.find(';', offset);
    std::string_view row_text = text.substr(offset, end == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : end - offset);
    std::vector<LaurentPoly> row;
    std::size_t cell_offset = 0;
    for (;;) {
      std::size_t bar = row_text.find('|', cell_offset);
      std::string_view cell = row_text.substr(
          cell_offset, bar == std::string_view::npos ? std::string_view::npos
                                                     : bar - cell_offset);
      detail::Cursor cur(cell, 1, offset + cell_offset);
      row.push_back(cur.polynomial());
      if (!cur.at_end()) cur.fail("unexpected input in matrix entry");
      if (bar == std::string_view::npos) break;
      cell_offset = bar + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row " + std::to_string(rows.size() + 1) + " has " +
                           std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       1, offset + 1);
    rows.push_back(std::move(row));
    if (end == std::string_view::npos) break;
    offset = end + 1;
  }
  PolyMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

namespace detail {

struct RowSpec {
  std::vector<LaurentPoly> entries;
  Rational constant;
  std::map<std::int64_t, Rational> overrides;
  std::size_t line = 0;
};

inline Trajectory rhs_trajectory(const std::vector<RowSpec>& rows) {
  Vector constant;
  std::int64_t first = 0, last = 0;
  bool any = false;
  for (const auto& r : rows) {
    constant.push_back(r.constant);
    for (const auto& [k, v] : r.overrides) {
      first = any ? std::min(first, k) : k;
      last = any ? std::max(last, k) : k;
      any = true;
    }
  }
  if (!any) return Trajectory::constant(constant);
  std::vector<Vector> values;
  for (std::int64_t k = first; k <= last; ++k) {
    Vector v = constant;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto it = rows[i].overrides.find(k);
      if (it != rows[i].overrides.end()) v[i] = it->second;
    }
    values.push_back(std::move(v));
  }
  return Trajectory::quasi_constant(constant, first, std::move(values));
}

inline PolyMatrix rows_to_matrix(const std::vector<RowSpec>& rows, std::size_t q) {
  PolyMatrix m(rows.size(), q);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < q; ++j) m(i, j) = rows[i].entries[j];
  return m;
}

}  // namespace detail

/// Parses the sectioned `.bsys` text format:
///
///     # comment
///     [vars]
///     x1 x2 u
///     [eq]
///     s - 2 | 0 | 0 = 0
///     [ineq]
///     1 | 0 | 0 <= 5
///     0 | 0 | 1 <= 1 @3:2
///
/// Entries use the polynomial grammar; `@k:v` overrides the right-hand side
/// at time k (a finite perturbation of the constant).
inline BehavioralSystem parse_model(std::string_view text) {
  enum class Section { None, Vars, Eq, Ineq } section = Section::None;
  std::vector<std::string> names;
  bool have_vars = false;
  std::vector<detail::RowSpec> eq_rows, ineq_rows;
  bool have_eq = false, have_ineq = false;

  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    offset = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    detail::Cursor cur(line, line_no);
    if (cur.at_end()) continue;
    if (cur.peek() == '[') {
      std::string trimmed(line);
      trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
      trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
      if (trimmed == "[vars]") section = Section::Vars, have_vars = true;
      else if (trimmed == "[eq]") section = Section::Eq, have_eq = true;
      else if (trimmed == "[ineq]") section = Section::Ineq, have_ineq = true;
      else cur.fail("unknown section '" + trimmed + "'");
      continue;
    }
    switch (section) {
      case Section::None:
        cur.fail("content before the first section header");
      case Section::Vars: {
        std::istringstream words{std::string(line)};
        for (std::string w; words >> w;) names.push_back(w);
        break;
      }
      case Section::Eq:
      case Section::Ineq: {
        detail::RowSpec row;
        row.line = line_no;
        // Entries run up to the relation symbol.
        std::size_t rel_pos = section == Section::Eq ? line.find('=') : line.find("<=");
        if (rel_pos == std::string_view::npos)
          cur.fail(section == Section::Eq ? "expected '= rhs'" : "expected '<= rhs'");
        std::string_view lhs = line.substr(0, rel_pos);
        std::size_t cell_offset = 0;
        for (;;) {
          std::size_t bar = lhs.find('|', cell_offset);
          std::string_view cell = lhs.substr(
              cell_offset, bar == std::string_view::npos ? std::string_view::npos
                                                         : bar - cell_offset);
          detail::Cursor cell_cur(cell, line_no, cell_offset);
          row.entries.push_back(cell_cur.polynomial());
          if (!cell_cur.at_end()) cell_cur.fail("unexpected input in entry");
          if (bar == std::string_view::npos) break;
          cell_offset = bar + 1;
        }
        const std::size_t rhs_start = rel_pos + (section == Section::Eq ? 1 : 2);
        detail::Cursor rhs(line.substr(rhs_start), line_no, rhs_start);
        int sign = 1;
        if (rhs.accept('-')) sign = -1;
        else rhs.accept('+');
        row.constant = sign * rhs.number();
        while (rhs.accept('@')) {
          std::int64_t k = rhs.integer();
          if (!rhs.accept(':')) rhs.fail("expected ':' after perturbation index");
          int vsign = 1;
          if (rhs.accept('-')) vsign = -1;
          row.overrides[k] = vsign * rhs.number();
        }
        if (!rhs.at_end()) rhs.fail("unexpected input after right-hand side");
        (section == Section::Eq ? eq_rows : ineq_rows).push_back(std::move(row));
        break;
      }
    }
  }

  BehavioralSystem sys;
  std::size_t q = 0;
  if (have_vars && !names.empty()) q = names.size();
  else if (!eq_rows.empty()) q = eq_rows.front().entries.size();
  else if (!ineq_rows.empty()) q = ineq_rows.front().entries.size();
  auto check_rows = [&](const std::vector<detail::RowSpec>& rows, const char* block) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].entries.size() != q)
        throw ParseError(std::string(block) + " row " + std::to_string(i + 1) +
                             ": " + std::to_string(rows[i].entries.size()) +
                             " entries, expected " + std::to_string(q),
                         rows[i].line, 1);
  };
  check_rows(eq_rows, "[eq]");
  check_rows(ineq_rows, "[ineq]");
  if (eq_rows.empty() && ineq_rows.empty())
    throw ParseError(have_eq || have_ineq ? "model has no constraint rows"
                                          : "model has no [eq] or [ineq] section",
                     line_no, 1);
  sys.q = q;
  sys.variable_names = names;
  if (!eq_rows.empty()) {
    sys.R = detail::rows_to_matrix(eq_rows, q);
    sys.d = detail::rhs_trajectory(eq_rows);
  }
  if (!ineq_rows.empty()) {
    sys.H = detail::rows_to_matrix(ineq_rows, q);
    sys.g = detail::rhs_trajectory(ineq_rows);
  }
  sys.validate();
  return sys;
}

/// Inverse of parse_model up to formatting.
inline std::string serialize_model(const BehavioralSystem& sys) {
  std::ostringstream out;
  if (!sys.variable_names.empty()) {
    out << "[vars]\n";
    for (std::size_t j = 0; j < sys.variable_names.size(); ++j)
      out << (j ? " " : "") << sys.variable_names[j];
    out << "\n";
  }
  auto block = [&](const char* header, const PolyMatrix& m, const Trajectory& rhs,
                   const char* rel) {
    out << header << "\n";
    const Window w = rhs.window();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j)
        out << (j ? " | " : "") << to_string(m(i, j));
      out << " " << rel << " " << to_string(rhs.constant_part()[i]);
      for (std::int64_t k = w.first; k <= w.last; ++k)
        if (rhs.at(k, i) != rhs.constant_part()[i])
          out << " @" << k << ":" << to_string(rhs.at(k, i));
      out << "\n";
    }
  };
  if (sys.R) block("[eq]", *sys.R, *sys.d, "=");
  if (sys.H) block("[ineq]", *sys.H, *sys.g, "<=");
  return out.str();
}

// ---------------------------------------------------------------------------
// Trajectory CSV
//
//     # extension=quasi-constant dim=2 constant=15;10
//     k,w1,w2
//     0,15,10
//
// Further `# key=value` comment lines carry metadata (for example the exact
// objective of a certificate).

using Metadata = std::map<std::string, std::string>;

inline void write_trajectory_csv(std::ostream& out, const Trajectory& t,
                                 const std::vector<std::string>& names = {},
                                 const Metadata& extra = {}) {
  out << "# extension=" << to_string(t.extension()) << " dim=" << t.dim();
  if (t.extension() == Extension::QuasiConstant) {
    out << " constant=";
    for (std::size_t i = 0; i < t.dim(); ++i)
      out << (i ? ";" : "") << to_string(t.constant_part()[i]);
  }
  out << "\n";
  for (const auto& [key, value] : extra) out << "# " << key << "=" << value << "\n";
  out << "k";
  for (std::size_t i = 0; i < t.dim(); ++i)
    out << "," << (i < names.size() ? names[i] : "c" + std::to_string(i + 1));
  out << "\n";
  const Window w = t.window();
  for (std::int64_t k = w.first; k <= w.last; ++k) {
    out << k;
    for (const auto& v : t.at(k)) out << "," << to_string(v);
    out << "\n";
  }
}

struct TrajectoryFile {
  Trajectory trajectory;
  std::vector<std::string> names;
  Metadata metadata;
};

/// Reads the format written by write_trajectory_csv. A file without an
/// extension header is read as a Bounded record.
inline TrajectoryFile read_trajectory_csv(std::string_view text) {
  TrajectoryFile file;
  Extension ext = Extension::Bounded;
  Vector constant;
  std::vector<std::pair<std::int64_t, Vector>> rows;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(offset, end - offset));
    offset = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') {
      std::istringstream words(line.substr(1));
      for (std::string word; words >> word;) {
        auto eq = word.find('=');
        if (eq == std::string::npos) continue;
        std::string key = word.substr(0, eq), value = word.substr(eq + 1);
        if (key == "extension") {
          if (value == "finite-support") ext = Extension::FiniteSupport;
          else if (value == "quasi-constant") ext = Extension::QuasiConstant;
          else if (value == "periodic") ext = Extension::Periodic;
          else if (value == "bounded") ext = Extension::Bounded;
          else throw ParseError("unknown extension '" + value + "'", line_no, 1);
        } else if (key == "constant") {
          std::istringstream parts(value);
          for (std::string part; std::getline(parts, part, ';');)
            constant.push_back(parse_rational(part));
        } else if (key != "dim") {
          file.metadata[key] = value;
        }
      }
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream parts(line);
    for (std::string cell; std::getline(parts, cell, ',');) {
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      cells.push_back(cell);
    }
    if (rows.empty() && file.names.empty() && !cells.empty() &&
        !cells.front().empty() &&
        !std::isdigit(static_cast<unsigned char>(cells.front().back()))) {
      file.names.assign(cells.begin() + 1, cells.end());
      continue;
    }
    if (cells.size() < 2) throw ParseError("expected index and values", line_no, 1);
    std::int64_t k = 0;
    Vector v;
    try {
      k = std::stoll(cells[0]);
      for (std::size_t i = 1; i < cells.size(); ++i) v.push_back(parse_rational(cells[i]));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no, 1);
    }
    if (!rows.empty()) {
      if (k != rows.back().first + 1)
        throw ParseError("indices must be consecutive", line_no, 1);
      if (v.size() != rows.back().second.size())
        throw ParseError("inconsistent number of columns", line_no, 1);
    }
    rows.emplace_back(k, std::move(v));
  }
  if (rows.empty()) throw ParseError("trajectory file has no data rows", line_no, 1);
  std::vector<Vector> values;
  for (auto& [k, v] : rows) values.push_back(std::move(v));
  const std::int64_t first = rows.front().first;
  switch (ext) {
    case Extension::FiniteSupport:
      file.trajectory = Trajectory::finite_support(first, std::move(values));
      break;
    case Extension::QuasiConstant:
      if (constant.size() != values.front().size())
        throw ParseError("constant part has wrong dimension", 1, 1);
      file.trajectory = Trajectory::quasi_constant(constant, first, std::move(values));
      break;
    case Extension::Periodic:
      file.trajectory = Trajectory::periodic(first, std::move(values));
      break;
    case Extension::Bounded:
      file.trajectory = Trajectory::bounded(first, std::move(values));
      break;
  }
  return file;
}

}  // namespace behav
