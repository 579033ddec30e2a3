#pragma once

#include "behav/feasibility.hpp"
#include "behav/model.hpp"
#include "behav/model_io.hpp"
#include "behav/parametrize.hpp"
#include "behav/reduction.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace behav::cli {

enum ExitCode : int {
  kFeasible = 0,
  kOk = 0,
  kInfeasible = 1,
  kUsage = 2,
  kUnknown = 3,
};

enum class Format { Text, Csv };

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

/// FNV-1a, hex encoded.
inline std::string digest(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

/// Budget defaults, overridable by BEHAV_WINDOW_MAX and BEHAV_PERIODS.
inline Budget default_budget() {
  Budget b;
  if (const char* w = std::getenv("BEHAV_WINDOW_MAX"); w && *w)
    b.windows = window_schedule(std::stoi(w));
  if (const char* p = std::getenv("BEHAV_PERIODS"); p && *p) {
    b.periods.clear();
    std::istringstream parts(p);
    for (std::string part; std::getline(parts, part, ',');)
      b.periods.push_back(std::stoi(part));
  }
  return b;
}

// ---------------------------------------------------------------------------
// Certificate files: the stacked dual (y; z) in trajectory CSV form.

inline std::string certificate_csv(const BehavioralSystem& sys, const Certificate& cert) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sys.equality_rows(); ++i) names.push_back("y" + std::to_string(i + 1));
  for (std::size_t i = 0; i < sys.inequality_rows(); ++i) names.push_back("z" + std::to_string(i + 1));
  const Trajectory stacked = cert.y && cert.z ? stack(*cert.y, *cert.z)
                                              : (cert.y ? *cert.y : *cert.z);
  std::ostringstream out;
  write_trajectory_csv(out, stacked, names,
                       {{"certificate", "farkas"},
                        {"equalities", std::to_string(sys.equality_rows())},
                        {"inequalities", std::to_string(sys.inequality_rows())},
                        {"objective", to_string(cert.objective)}});
  return out.str();
}

inline Certificate read_certificate(const BehavioralSystem& sys, std::string_view text) {
  const TrajectoryFile file = read_trajectory_csv(text);
  const Trajectory& t = file.trajectory;
  const std::size_t le = sys.equality_rows(), li = sys.inequality_rows();
  if (t.dim() != le + li || t.extension() != Extension::FiniteSupport)
    throw std::runtime_error("certificate does not match the model's row counts");
  auto it = file.metadata.find("objective");
  if (it == file.metadata.end()) throw std::runtime_error("certificate has no objective line");
  auto slice = [&](std::size_t offset, std::size_t dim) {
    std::vector<Vector> rows;
    for (const auto& v : t.values())
      rows.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(offset),
                        v.begin() + static_cast<std::ptrdiff_t>(offset + dim));
    return Trajectory::finite_support(t.window().first, std::move(rows));
  };
  Certificate cert;
  if (le) cert.y = slice(0, le);
  if (li) cert.z = slice(le, li);
  cert.objective = parse_rational(it->second);
  return cert;
}

inline std::string witness_csv(const BehavioralSystem& sys, const Trajectory& w) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < sys.q; ++j) names.push_back(sys.variable_name(j));
  std::ostringstream out;
  write_trajectory_csv(out, w, names, {{"witness", "trajectory"}});
  return out.str();
}

// ---------------------------------------------------------------------------
// check

struct RunReport {
  std::string command;
  std::string model_digest;
  std::string verdict;
  std::string artifact_path;
  std::string objective;
  std::string note;
  double seconds = 0;
  std::vector<int> windows;
  std::vector<int> periods;
};

inline void print_report(std::ostream& out, const RunReport& r, Format format) {
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  std::vector<std::pair<std::string, std::string>> fields{
      {"command", r.command},
      {"model_digest", r.model_digest},
      {"verdict", r.verdict},
      {"artifact", r.artifact_path},
      {"objective", r.objective},
      {"windows", join(r.windows)},
      {"periods", join(r.periods)},
      {"seconds", [&] {
         std::ostringstream s;
         s << std::fixed << std::setprecision(3) << r.seconds;
         return s.str();
       }()},
      {"note", r.note}};
  if (format == Format::Csv) {
    out << "field,value\n";
    for (const auto& [k, v] : fields) out << k << "," << v << "\n";
    return;
  }
  out << r.verdict << "\n";
  for (const auto& [k, v] : fields)
    if (k != "verdict" && !v.empty()) out << "  " << k << ": " << v << "\n";
}

struct CheckOptions {
  std::filesystem::path model;
  Budget budget = default_budget();
  Format format = Format::Text;
  bool write_artifacts = true;
};

inline int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  BehavioralSystem sys;
  std::string text;
  try {
    text = read_file(opt.model);
    sys = parse_model(text);
  } catch (const std::exception& e) {
    err << opt.model.string() << ": " << e.what() << "\n";
    return kUsage;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Verdict verdict = decide(sys, opt.budget);
  RunReport report;
  report.command = "check " + opt.model.string();
  report.model_digest = digest(text);
  report.verdict = verdict_name(verdict);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int code = kUnknown;
  if (const auto* f = std::get_if<Feasible>(&verdict)) {
    code = kFeasible;
    report.periods = opt.budget.periods;
    if (opt.write_artifacts) {
      const auto path = std::filesystem::path(opt.model.string() + ".witness.csv");
      write_file(path, witness_csv(sys, f->witness));
      report.artifact_path = path.string();
    }
  } else if (const auto* inf = std::get_if<Infeasible>(&verdict)) {
    code = kInfeasible;
    report.windows = opt.budget.windows;
    report.objective = to_string(inf->certificate.objective);
    if (opt.write_artifacts) {
      const auto path = std::filesystem::path(opt.model.string() + ".certificate.csv");
      write_file(path, certificate_csv(sys, inf->certificate));
      report.artifact_path = path.string();
    }
  } else {
    const auto& u = std::get<Unknown>(verdict);
    report.windows = u.windows_tried;
    report.periods = u.periods_tried;
    report.note = u.note;
  }
  print_report(out, report, opt.format);
  return code;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::filesystem::path model;
  std::optional<std::filesystem::path> certificate;
  std::optional<std::filesystem::path> witness;
};

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const BehavioralSystem sys = parse_model(read_file(opt.model));
    if (opt.certificate) {
      const Certificate cert = read_certificate(sys, read_file(*opt.certificate));
      const std::string defect = certificate_defect(sys, cert);
      out << (defect.empty() ? "VALID certificate, objective " + to_string(cert.objective)
                             : "INVALID certificate: " + defect)
          << "\n";
      return defect.empty() ? kOk : kInfeasible;
    }
    if (opt.witness) {
      const Trajectory w = read_trajectory_csv(read_file(*opt.witness)).trajectory;
      const bool ok = verify_witness(sys, w);
      out << (ok ? "VALID witness" : "INVALID witness") << "\n";
      return ok ? kOk : kInfeasible;
    }
    err << "verify: give --certificate or --witness\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << "\n";
    return kUsage;
  }
}

// ---------------------------------------------------------------------------
// reduce

enum class ReduceTarget { Dual, Inequality, Equality, Mixed, Slack };

struct ReduceOptions {
  std::optional<std::filesystem::path> model;
  std::optional<std::string> matrix;
  ReduceTarget target = ReduceTarget::Dual;
};

inline void print_reduced(std::ostream& out, const PolyMatrix& m, const ReducedForm& r) {
  out << "input " << m.rows() << "x" << m.cols() << ":\n" << to_string(m);
  out << "rank: " << r.rank << "\n";
  out << "pivots:";
  for (auto c : r.pivot_cols) out << " " << c + 1;
  out << "\n";
  out << "U:\n" << to_string(r.U);
  out << "T:\n" << to_string(r.T);
  out << "det(U): " << to_string(det(r.U)) << "\n";
}

inline int cmd_reduce(const ReduceOptions& opt, std::ostream& out, std::ostream& err) {
  PolyMatrix m;
  try {
    if (opt.matrix) {
      m = parse_matrix(*opt.matrix);
    } else if (opt.model) {
      const BehavioralSystem sys = parse_model(read_file(*opt.model));
      switch (opt.target) {
        case ReduceTarget::Dual: m = sys.dual_operator(); break;
        case ReduceTarget::Inequality:
          if (!sys.H) throw std::runtime_error("model has no inequalities");
          m = *sys.H;
          break;
        case ReduceTarget::Equality:
          if (!sys.R) throw std::runtime_error("model has no equalities");
          m = *sys.R;
          break;
        case ReduceTarget::Mixed: m = augment_mixed(sys).first; break;
        case ReduceTarget::Slack: {
          auto [h, g] = augment_mixed(sys);
          m = augment_slack(h, g).first;
          break;
        }
      }
    } else {
      err << "reduce: give a model file or --matrix\n";
      return kUsage;
    }
  } catch (const std::exception& e) {
    err << "reduce: " << e.what() << "\n";
    return kUsage;
  }
  print_reduced(out, m, reduce(m));
  return kOk;
}

// ---------------------------------------------------------------------------
// rollout

struct RolloutOptions {
  std::filesystem::path model;
  std::optional<std::filesystem::path> initial;
  std::optional<std::filesystem::path> slack;
  std::int64_t horizon = 10;
  std::int64_t start = 0;
  bool footprint_only = false;
  bool print_recurrences = false;
};

/// CSV rows `variable,k,value`; the header line is optional.
inline Assignment read_assignment(const RecursiveForm& form,
                                  const std::vector<std::string>& names,
                                  std::string_view text) {
  std::map<std::string, std::size_t> columns;
  for (std::size_t c = 0; c < form.q + form.l; ++c) {
    columns[column_name(form, c, names)] = c;
    columns[column_name(form, c)] = c;
  }
  Assignment out;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::istringstream parts(line);
    for (std::string cell; std::getline(parts, cell, ',');) {
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      cells.push_back(cell);
    }
    if (cells.size() != 3) throw ParseError("expected variable,k,value", line_no, 1);
    if (cells[0] == "variable") continue;
    auto col = columns.find(cells[0]);
    if (col == columns.end()) throw ParseError("unknown variable '" + cells[0] + "'", line_no, 1);
    out[{col->second, std::stoll(cells[1])}] = parse_rational(cells[2]);
  }
  return out;
}

inline int cmd_rollout(const RolloutOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const BehavioralSystem sys = parse_model(read_file(opt.model));
    const auto [h, g] = augment_mixed(sys);
    const RecursiveForm form = build_recursive_form(h, g);
    const auto footprint = initial_footprint(form, opt.start);
    if (opt.print_recurrences) out << to_string(form, sys.variable_names);
    if (opt.footprint_only || (!opt.initial && !footprint.empty())) {
      std::ostream& dest = opt.footprint_only ? out : err;
      dest << "variable,first,last\n";
      for (const auto& e : footprint)
        dest << column_name(form, e.column, sys.variable_names) << "," << e.first << ","
             << e.last << "\n";
      if (opt.footprint_only) return kOk;
      err << "rollout: --initial must assign the values listed above\n";
      return kUsage;
    }
    const Assignment initial = opt.initial ? read_assignment(form, sys.variable_names,
                                                             read_file(*opt.initial))
                                           : Assignment{};
    const Trajectory slack = opt.slack ? read_trajectory_csv(read_file(*opt.slack)).trajectory
                                       : Trajectory::zero(form.l);
    const Rollout result = rollout(form, opt.start, initial, slack, opt.horizon);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < sys.q; ++j) names.push_back(sys.variable_name(j));
    write_trajectory_csv(out, result.w, names);
    return kOk;
  } catch (const std::exception& e) {
    err << "rollout: " << e.what() << "\n";
    return kUsage;
  }
}

// ---------------------------------------------------------------------------
// quiver

/// Recovers (A, B) from R = [sI - A, -B, ...] with n state rows on top.
inline StateSpace state_space_from_behavior(const BehavioralSystem& sys) {
  if (!sys.R) throw std::runtime_error("model has no equalities");
  const PolyMatrix& R = *sys.R;
  if (R.min_degree().value_or(0) < 0 || R.max_degree().value_or(0) > 1)
    throw std::runtime_error("equalities are not first-order state equations");
  std::size_t n = 0;
  while (n < R.rows()) {
    bool has_shift = false;
    for (std::size_t j = 0; j < R.cols(); ++j) has_shift |= R(n, j).coeff(1) != 0;
    if (!has_shift) break;
    ++n;
  }
  for (std::size_t i = 0; i < R.rows(); ++i)
    for (std::size_t j = 0; j < R.cols(); ++j)
      if (R(i, j).coeff(1) != (i < n && i == j ? 1 : 0))
        throw std::runtime_error("equalities are not of the form x(k+1) = A x + B u");
  StateSpace ss;
  ss.A.assign(n, std::vector<Rational>(n, 0));
  const std::size_t m = R.cols() - n - (R.rows() - n);
  ss.B.assign(n, std::vector<Rational>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ss.A[i][j] = -R(i, j).coeff(0);
    for (std::size_t j = 0; j < m; ++j) ss.B[i][j] = -R(i, n + j).coeff(0);
  }
  return ss;
}

struct GridAxis {
  Rational min = 0;
  Rational max = 0;
  int count = 1;
  Rational at(int i) const {
    if (count <= 1) return min;
    return min + (max - min) * i / (count - 1);
  }
};

/// `min:max:count`
inline GridAxis parse_axis(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw std::invalid_argument("grid axis must be min:max:count, got '" + spec + "'");
  GridAxis axis{parse_rational(spec.substr(0, a)), parse_rational(spec.substr(a + 1, b - a - 1)),
                std::stoi(spec.substr(b + 1))};
  if (axis.count < 1) throw std::invalid_argument("grid axis count must be positive");
  return axis;
}

struct QuiverOptions {
  std::filesystem::path model;
  std::string x1 = "1:5:5";
  std::string x2 = "-5:5:11";
  int steps = 3;
};

/// CSV rows `kind,seed,step,x1,x2,dx1,dx2`:
///   field   one-step displacement (A - I) x at a grid point (zero input)
///   corner  corners of the state box found among the inequalities
///   stream  the free response x(t+1) = A x(t) from each grid seed
inline int cmd_quiver(const QuiverOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const BehavioralSystem sys = parse_model(read_file(opt.model));
    const StateSpace ss = state_space_from_behavior(sys);
    if (ss.A.size() != 2)
      throw std::runtime_error("quiver needs a 2-dimensional state, model has " +
                               std::to_string(ss.A.size()));
    const GridAxis ax = parse_axis(opt.x1), ay = parse_axis(opt.x2);
    auto step = [&](const Vector& x) {
      return Vector{ss.A[0][0] * x[0] + ss.A[0][1] * x[1], ss.A[1][0] * x[0] + ss.A[1][1] * x[1]};
    };
    out << "kind,seed,step,x1,x2,dx1,dx2\n";
    for (int i = 0; i < ax.count; ++i)
      for (int j = 0; j < ay.count; ++j) {
        const Vector x{ax.at(i), ay.at(j)};
        const Vector next = step(x);
        out << "field,,," << to_string(x[0]) << "," << to_string(x[1]) << ","
            << to_string(Rational(next[0] - x[0])) << "," << to_string(Rational(next[1] - x[1]))
            << "\n";
      }
    // State box from single-entry constant inequality rows.
    if (sys.H) {
      std::optional<Rational> lower[2], upper[2];
      for (std::size_t r = 0; r < sys.H->rows(); ++r) {
        std::optional<std::size_t> col;
        bool simple = true;
        for (std::size_t c = 0; c < sys.H->cols(); ++c) {
          const LaurentPoly& p = (*sys.H)(r, c);
          if (p.is_zero()) continue;
          if (col || p.term_count() != 1 || p.coeff(0) == 0) simple = false;
          col = c;
        }
        if (!simple || !col || *col >= 2) continue;
        const Rational a = (*sys.H)(r, *col).coeff(0);
        const Rational bound = sys.g->constant_part()[r] / a;
        auto& slot = a > 0 ? upper[*col] : lower[*col];
        if (!slot || (a > 0 ? bound < *slot : bound > *slot)) slot = bound;
      }
      if (lower[0] && upper[0] && lower[1] && upper[1])
        for (const auto& cx : {*lower[0], *upper[0]})
          for (const auto& cy : {*lower[1], *upper[1]})
            out << "corner,,," << to_string(cx) << "," << to_string(cy) << ",,\n";
    }
    int seed = 0;
    for (int i = 0; i < ax.count; ++i)
      for (int j = 0; j < ay.count; ++j, ++seed) {
        Vector x{ax.at(i), ay.at(j)};
        for (int t = 0; t <= opt.steps; ++t) {
          out << "stream," << seed << "," << t << "," << to_string(x[0]) << ","
              << to_string(x[1]) << ",,\n";
          x = step(x);
        }
      }
    return kOk;
  } catch (const std::exception& e) {
    err << "quiver: " << e.what() << "\n";
    return kUsage;
  }
}

// ---------------------------------------------------------------------------
// cost

struct CostOptions {
  std::filesystem::path model;
  std::filesystem::path trajectory;
  std::filesystem::path costs;
  std::string variable = "u";
};

inline int cmd_cost(const CostOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const BehavioralSystem sys = parse_model(read_file(opt.model));
    const Trajectory w = read_trajectory_csv(read_file(opt.trajectory)).trajectory;
    const Trajectory c = read_trajectory_csv(read_file(opt.costs)).trajectory;
    if (w.dim() != sys.q)
      throw std::runtime_error("trajectory has " + std::to_string(w.dim()) +
                               " components, model has " + std::to_string(sys.q));
    std::optional<std::size_t> column;
    for (std::size_t j = 0; j < sys.q; ++j)
      if (sys.variable_name(j) == opt.variable) column = j;
    if (!column) throw std::runtime_error("model has no variable '" + opt.variable + "'");
    out << to_string(linear_cost(w.component(*column), c)) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "cost: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace behav::cli
