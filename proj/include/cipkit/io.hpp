// Copyright 2026 the cipkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CIPKIT_IO_HPP_
#define CIPKIT_IO_HPP_

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cipkit/problem.hpp"

namespace cipkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class FileFormat { kCip, kMps };

namespace io_detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

inline bool parse_number(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

inline std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("\\#");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

struct VarTable {
  std::map<std::string, int> index;
  Problem* p;

  int get_or_add(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    const int j = p->add_var(name);
    index.emplace(name, j);
    return j;
  }
  std::optional<int> lookup(const std::string& name) const {
    auto it = index.find(name);
    return it == index.end() ? std::nullopt : std::optional<int>(it->second);
  }
};

// Parses "coef var" terms with optional signs, e.g. "-2 w + 2 x + 3 y".
inline SparseVector parse_linear_expr(const std::vector<std::string>& toks, std::size_t begin,
                                      std::size_t end, VarTable& vars, int lineno) {
  SparseVector expr;
  double sign = 1.0;
  std::optional<double> coef;
  for (std::size_t i = begin; i < end; ++i) {
    const std::string& t = toks[i];
    if (t == "+" || t == "-") {
      if (coef) throw ParseError("dangling coefficient before '" + t + "'", lineno);
      if (t == "-") sign = -sign;
      continue;
    }
    double value = 0.0;
    if (parse_number(t, value)) {
      if (coef) throw ParseError("two consecutive numbers in expression", lineno);
      coef = sign * value;
      sign = 1.0;
      continue;
    }
    expr.push_back({vars.get_or_add(t), coef ? *coef : sign});
    coef.reset();
    sign = 1.0;
  }
  if (coef || sign < 0.0) throw ParseError("expression ends with dangling coefficient", lineno);
  return canonicalize(std::move(expr));
}

inline std::optional<std::size_t> find_relation(const std::vector<std::string>& toks,
                                                std::size_t begin, std::string& rel) {
  for (std::size_t i = begin; i < toks.size(); ++i) {
    if (toks[i] == "<=" || toks[i] == ">=" || toks[i] == "=") {
      rel = toks[i];
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace io_detail

/// Parses the line-based cip text format.
inline Problem parse_cip(std::istream& in, const std::string& name = "problem") {
  using namespace io_detail;
  Problem p;
  p.name = name;
  VarTable vars{{}, &p};

  enum class Section { kNone, kObjective, kRows, kBounds, kGeneral, kBinary, kDone };
  Section section = Section::kNone;
  Sense sense = Sense::kMinimize;
  SparseVector objective;
  // Bound edits are applied after all variables are known.
  struct BoundEdit {
    int var;
    std::optional<double> lb, ub;
    bool free = false;
  };
  std::vector<BoundEdit> bound_edits;
  std::vector<int> general_vars, binary_vars;
  std::string line;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    auto toks = tokenize(line);
    if (toks.empty()) continue;

    std::string upper_tok = toks[0];
    for (char& c : upper_tok) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));

    if (toks.size() == 1 && (upper_tok == "MINIMIZE" || upper_tok == "MAXIMIZE")) {
      sense = upper_tok == "MINIMIZE" ? Sense::kMinimize : Sense::kMaximize;
      section = Section::kObjective;
      continue;
    }
    if (toks.size() == 2 && upper_tok == "SUBJECT") {
      section = Section::kRows;
      continue;
    }
    if (toks.size() == 1 && upper_tok == "BOUNDS") { section = Section::kBounds; continue; }
    if (toks.size() == 1 && upper_tok == "GENERAL") { section = Section::kGeneral; continue; }
    if (toks.size() == 1 && upper_tok == "BINARY") { section = Section::kBinary; continue; }
    if (toks.size() == 1 && upper_tok == "END") { section = Section::kDone; break; }

    switch (section) {
      case Section::kNone:
        throw ParseError("content before MINIMIZE/MAXIMIZE header", lineno);
      case Section::kObjective: {
        std::size_t begin = 0;
        if (!toks.empty() && toks[0].back() == ':') begin = 1;
        auto terms = parse_linear_expr(toks, begin, toks.size(), vars, lineno);
        for (const auto& e : terms) objective.push_back(e);
        break;
      }
      case Section::kRows: {
        if (upper_tok == "IND") {
          // IND zname -> xname <= 0
          if (toks.size() != 6 || toks[2] != "->" || toks[4] != "<=" || toks[5] != "0")
            throw ParseError("malformed IND line, expected 'IND z -> x <= 0'", lineno);
          IndicatorCons ind;
          ind.binvar = vars.get_or_add(toks[1]);
          ind.var = vars.get_or_add(toks[3]);
          p.indicators.push_back(ind);
          break;
        }
        if (upper_tok == "ACT") {
          // ACT xname >= L  (activation bound for the indicator on x)
          double act = 0.0;
          if (toks.size() != 4 || toks[2] != ">=" || !parse_number(toks[3], act))
            throw ParseError("malformed ACT line, expected 'ACT x >= L'", lineno);
          const auto xi = vars.lookup(toks[1]);
          if (!xi) throw ParseError("ACT references unknown variable " + toks[1], lineno);
          bool found = false;
          for (auto& ind : p.indicators)
            if (ind.var == *xi && ind.activation == 0.0) {
              ind.activation = act;
              found = true;
              break;
            }
          if (!found) throw ParseError("ACT line has no pending IND for " + toks[1], lineno);
          break;
        }
        if (upper_tok == "SIG") {
          // SIG tname = var^exp [* var^exp ...]
          if (toks.size() < 4 || toks[2] != "=")
            throw ParseError("malformed SIG line, expected 'SIG t = var^exp ...'", lineno);
          SignomialTerm term;
          term.tvar = vars.get_or_add(toks[1]);
          for (std::size_t i = 3; i < toks.size(); ++i) {
            if (toks[i] == "*") continue;
            const auto caret = toks[i].find('^');
            if (caret == std::string::npos)
              throw ParseError("SIG factor missing '^': " + toks[i], lineno);
            double expo = 0.0;
            if (!parse_number(toks[i].substr(caret + 1), expo))
              throw ParseError("bad exponent in " + toks[i], lineno);
            term.vars.push_back(vars.get_or_add(toks[i].substr(0, caret)));
            term.exponents.push_back(expo);
          }
          p.signomials.push_back(std::move(term));
          break;
        }
        std::size_t begin = 0;
        LinRow row;
        if (toks[0].back() == ':') {
          row.name = toks[0].substr(0, toks[0].size() - 1);
          begin = 1;
        } else {
          row.name = "r" + std::to_string(p.rows.size());
        }
        std::string rel;
        const auto rel_pos = find_relation(toks, begin, rel);
        if (!rel_pos) throw ParseError("row without relation operator", lineno);
        double rhs = 0.0;
        if (*rel_pos + 1 != toks.size() - 1 || !parse_number(toks.back(), rhs))
          throw ParseError("row must end with a single numeric right-hand side", lineno);
        row.coeffs = parse_linear_expr(toks, begin, *rel_pos, vars, lineno);
        if (rel == "<=") { row.lhs = -kInfinity; row.rhs = rhs; }
        else if (rel == ">=") { row.lhs = rhs; row.rhs = kInfinity; }
        else { row.lhs = rhs; row.rhs = rhs; }
        p.rows.push_back(std::move(row));
        break;
      }
      case Section::kBounds: {
        if (toks.size() == 2 && toks[1] == "free") {
          BoundEdit e;
          e.var = vars.get_or_add(toks[0]);
          e.free = true;
          bound_edits.push_back(e);
          break;
        }
        double lb = 0.0, ub = 0.0, val = 0.0;
        BoundEdit e;
        if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=" &&
            parse_number(toks[0], lb) && parse_number(toks[4], ub)) {
          e.var = vars.get_or_add(toks[2]);
          e.lb = lb;
          e.ub = ub;
        } else if (toks.size() == 3 && toks[1] == "<=" && parse_number(toks[2], val)) {
          e.var = vars.get_or_add(toks[0]);
          e.ub = val;
        } else if (toks.size() == 3 && toks[1] == ">=" && parse_number(toks[2], val)) {
          e.var = vars.get_or_add(toks[0]);
          e.lb = val;
        } else if (toks.size() == 3 && toks[1] == "=" && parse_number(toks[2], val)) {
          e.var = vars.get_or_add(toks[0]);
          e.lb = val;
          e.ub = val;
        } else {
          throw ParseError("malformed bound line", lineno);
        }
        bound_edits.push_back(e);
        break;
      }
      case Section::kGeneral:
        for (const auto& t : toks) general_vars.push_back(vars.get_or_add(t));
        break;
      case Section::kBinary:
        for (const auto& t : toks) binary_vars.push_back(vars.get_or_add(t));
        break;
      case Section::kDone:
        break;
    }
  }

  for (const auto& e : canonicalize(std::move(objective)))
    p.objective[static_cast<std::size_t>(e.index)] = e.value;
  for (const auto& b : bound_edits) {
    const auto u = static_cast<std::size_t>(b.var);
    if (b.free) { p.lower[u] = -kInfinity; p.upper[u] = kInfinity; continue; }
    if (b.lb) p.lower[u] = *b.lb;
    if (b.ub) p.upper[u] = *b.ub;
  }
  for (int j : general_vars) p.integer[static_cast<std::size_t>(j)] = true;
  for (int j : binary_vars) {
    const auto u = static_cast<std::size_t>(j);
    p.integer[u] = true;
    p.lower[u] = std::max(p.lower[u], 0.0);
    p.upper[u] = std::min(p.upper[u], 1.0);
  }
  for (auto& ind : p.indicators)
    if (ind.activation <= 0.0)
      throw ParseError("indicator on " + p.var_names[static_cast<std::size_t>(ind.var)] +
                           " lacks an ACT activation line",
                       lineno);

  p.normalize_sense(sense);
  p.validate();
  return p;
}

/// Parses the fixed MPS subset: NAME, ROWS, COLUMNS (with INTORG/INTEND),
/// RHS, RANGES, BOUNDS, ENDATA.
inline Problem parse_mps(std::istream& in, const std::string& name = "problem") {
  using namespace io_detail;
  Problem p;
  p.name = name;
  VarTable vars{{}, &p};

  enum class Section { kNone, kRows, kColumns, kRhs, kRanges, kBounds, kDone };
  Section section = Section::kNone;
  std::map<std::string, int> row_index;  // -1 marks the objective row
  std::vector<char> row_type;
  std::string obj_row;
  std::map<std::string, SparseVector> row_terms;  // by row name
  SparseVector obj_terms;
  bool integer_mode = false;
  std::string line;
  int lineno = 0;

  auto ensure_row = [&](const std::string& rname, int ln) -> int {
    auto it = row_index.find(rname);
    if (it == row_index.end()) throw ParseError("unknown row " + rname, ln);
    return it->second;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '*') continue;  // comment line
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const bool indented = std::isspace(static_cast<unsigned char>(line[0])) != 0;

    if (!indented) {
      const std::string& kw = toks[0];
      if (kw == "NAME") { if (toks.size() > 1) p.name = toks[1]; continue; }
      if (kw == "ROWS") { section = Section::kRows; continue; }
      if (kw == "COLUMNS") { section = Section::kColumns; continue; }
      if (kw == "RHS") { section = Section::kRhs; continue; }
      if (kw == "RANGES") { section = Section::kRanges; continue; }
      if (kw == "BOUNDS") { section = Section::kBounds; continue; }
      if (kw == "ENDATA") { section = Section::kDone; break; }
      throw ParseError("unknown section '" + kw + "'", lineno);
    }

    switch (section) {
      case Section::kRows: {
        if (toks.size() != 2) throw ParseError("ROWS line needs type and name", lineno);
        char type = static_cast<char>(std::toupper(static_cast<unsigned char>(toks[0][0])));
        if (type == 'N') {
          if (obj_row.empty()) obj_row = toks[1];
          // additional free rows are ignored
          row_index[toks[1]] = -1;
          break;
        }
        if (type != 'L' && type != 'G' && type != 'E')
          throw ParseError("unknown row type '" + toks[0] + "'", lineno);
        LinRow row;
        row.name = toks[1];
        row_index[toks[1]] = static_cast<int>(p.rows.size());
        row_type.push_back(type);
        p.rows.push_back(std::move(row));
        break;
      }
      case Section::kColumns: {
        bool is_marker = false;
        for (const auto& t : toks)
          if (t == "'MARKER'" || t == "MARKER") is_marker = true;
        if (is_marker) {
          for (const auto& t : toks) {
            if (t == "'INTORG'" || t == "INTORG") integer_mode = true;
            if (t == "'INTEND'" || t == "INTEND") integer_mode = false;
          }
          break;
        }
        if (toks.size() < 3 || toks.size() % 2 == 0)
          throw ParseError("COLUMNS line needs column followed by row/value pairs", lineno);
        const int col = vars.get_or_add(toks[0]);
        p.integer[static_cast<std::size_t>(col)] =
            p.integer[static_cast<std::size_t>(col)] || integer_mode;
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          double v = 0.0;
          if (!parse_number(toks[i + 1], v))
            throw ParseError("bad numeric value " + toks[i + 1], lineno);
          const int r = ensure_row(toks[i], lineno);
          if (r < 0) {
            if (toks[i] == obj_row) obj_terms.push_back({col, v});
          } else {
            p.rows[static_cast<std::size_t>(r)].coeffs.push_back({col, v});
          }
        }
        break;
      }
      case Section::kRhs: {
        if (toks.size() < 3 || toks.size() % 2 == 0)
          throw ParseError("RHS line needs set name and row/value pairs", lineno);
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          double v = 0.0;
          if (!parse_number(toks[i + 1], v))
            throw ParseError("bad numeric value " + toks[i + 1], lineno);
          const int r = ensure_row(toks[i], lineno);
          if (r < 0) continue;  // objective constants are not supported
          const char type = row_type[static_cast<std::size_t>(r)];
          LinRow& row = p.rows[static_cast<std::size_t>(r)];
          if (type == 'L') row.rhs = v;
          else if (type == 'G') row.lhs = v;
          else { row.lhs = v; row.rhs = v; }
        }
        break;
      }
      case Section::kRanges: {
        if (toks.size() < 3 || toks.size() % 2 == 0)
          throw ParseError("RANGES line needs set name and row/value pairs", lineno);
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          double v = 0.0;
          if (!parse_number(toks[i + 1], v))
            throw ParseError("bad numeric value " + toks[i + 1], lineno);
          const int r = ensure_row(toks[i], lineno);
          if (r < 0) throw ParseError("range on objective row", lineno);
          const char type = row_type[static_cast<std::size_t>(r)];
          LinRow& row = p.rows[static_cast<std::size_t>(r)];
          if (type == 'L') row.lhs = row.rhs - std::abs(v);
          else if (type == 'G') row.rhs = row.lhs + std::abs(v);
          else if (v >= 0.0) row.rhs = row.lhs + v;
          else row.lhs = row.rhs + v;
        }
        break;
      }
      case Section::kBounds: {
        if (toks.size() < 3) throw ParseError("BOUNDS line too short", lineno);
        std::string type = toks[0];
        for (char& c : type) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        const int col = vars.get_or_add(toks[2]);
        const auto u = static_cast<std::size_t>(col);
        double v = 0.0;
        const bool has_value = toks.size() >= 4 && parse_number(toks[3], v);
        if ((type == "UP" || type == "LO" || type == "FX") && !has_value)
          throw ParseError("bound type " + type + " requires a value", lineno);
        if (type == "UP") p.upper[u] = v;
        else if (type == "LO") p.lower[u] = v;
        else if (type == "FX") { p.lower[u] = v; p.upper[u] = v; }
        else if (type == "FR") { p.lower[u] = -kInfinity; p.upper[u] = kInfinity; }
        else if (type == "BV") { p.lower[u] = 0.0; p.upper[u] = 1.0; p.integer[u] = true; }
        else throw ParseError("unsupported bound type '" + toks[0] + "'", lineno);
        break;
      }
      case Section::kNone:
        throw ParseError("data before any section header", lineno);
      case Section::kDone:
        break;
    }
  }
  if (section != Section::kDone) throw ParseError("missing ENDATA", lineno);

  for (const auto& e : canonicalize(std::move(obj_terms)))
    p.objective[static_cast<std::size_t>(e.index)] = e.value;
  for (auto& row : p.rows) row.coeffs = canonicalize(std::move(row.coeffs));
  p.normalize_sense(Sense::kMinimize);
  p.validate();
  return p;
}

inline Problem parse_problem(const std::string& path, std::optional<FileFormat> format = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FileFormat fmt;
  if (format) {
    fmt = *format;
  } else {
    fmt = FileFormat::kCip;
    if (path.size() >= 4) {
      std::string ext = path.substr(path.size() - 4);
      for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (ext == ".mps") fmt = FileFormat::kMps;
    }
  }
  std::string stem = path;
  const auto slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  const auto dot = stem.find_last_of('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  return fmt == FileFormat::kMps ? parse_mps(in, stem) : parse_cip(in, stem);
}

namespace io_detail {
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
inline void write_expr(std::ostream& os, const Problem& p, const SparseVector& expr) {
  bool first = true;
  for (const auto& e : expr) {
    const double c = e.value;
    if (first) {
      if (c < 0.0) os << "- ";
      first = false;
    } else {
      os << (c < 0.0 ? " - " : " + ");
    }
    os << fmt_num(std::abs(c)) << ' ' << p.var_names[static_cast<std::size_t>(e.index)];
  }
  if (first) os << "0 " << (p.num_vars > 0 ? p.var_names[0] : "x");
}
}  // namespace io_detail

/// Writes the problem in cip format; parse_cip(write_cip(p)) is equivalent
/// to p up to row ordering.
inline void write_cip(std::ostream& os, const Problem& p) {
  using io_detail::fmt_num;
  os << (p.sense_flipped ? "MAXIMIZE\n" : "MINIMIZE\n");
  SparseVector obj;
  for (int j = 0; j < p.num_vars; ++j) {
    const double c = p.sense_flipped ? -p.objective[static_cast<std::size_t>(j)]
                                     : p.objective[static_cast<std::size_t>(j)];
    if (c != 0.0) obj.push_back({j, c});
  }
  os << " obj: ";
  io_detail::write_expr(os, p, obj);
  os << "\nSUBJECT TO\n";
  for (const auto& row : p.rows) {
    os << ' ' << row.name << ": ";
    io_detail::write_expr(os, p, row.coeffs);
    if (is_finite_value(row.lhs) && is_finite_value(row.rhs) && row.lhs == row.rhs)
      os << " = " << fmt_num(row.rhs);
    else if (is_finite_value(row.rhs))
      os << " <= " << fmt_num(row.rhs);
    else
      os << " >= " << fmt_num(row.lhs);
    os << '\n';
    if (is_finite_value(row.lhs) && is_finite_value(row.rhs) && row.lhs != row.rhs) {
      // two-sided row: emit the lhs as a companion >= row
      os << ' ' << row.name << "_lo: ";
      io_detail::write_expr(os, p, row.coeffs);
      os << " >= " << fmt_num(row.lhs) << '\n';
    }
  }
  for (const auto& ind : p.indicators) {
    os << " IND " << p.var_names[static_cast<std::size_t>(ind.binvar)] << " -> "
       << p.var_names[static_cast<std::size_t>(ind.var)] << " <= 0\n";
    os << " ACT " << p.var_names[static_cast<std::size_t>(ind.var)] << " >= "
       << fmt_num(ind.activation) << '\n';
  }
  for (const auto& sig : p.signomials) {
    os << " SIG " << p.var_names[static_cast<std::size_t>(sig.tvar)] << " =";
    for (std::size_t k = 0; k < sig.vars.size(); ++k) {
      os << (k == 0 ? " " : " * ") << p.var_names[static_cast<std::size_t>(sig.vars[k])] << '^'
         << fmt_num(sig.exponents[k]);
    }
    os << '\n';
  }
  os << "BOUNDS\n";
  for (int j = 0; j < p.num_vars; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const bool lb_inf = !is_finite_value(p.lower[u]);
    const bool ub_inf = !is_finite_value(p.upper[u]);
    if (lb_inf && ub_inf) os << ' ' << p.var_names[u] << " free\n";
    else if (lb_inf) os << ' ' << p.var_names[u] << " <= " << fmt_num(p.upper[u]) << '\n';
    else if (ub_inf) os << ' ' << p.var_names[u] << " >= " << fmt_num(p.lower[u]) << '\n';
    else
      os << ' ' << fmt_num(p.lower[u]) << " <= " << p.var_names[u] << " <= "
         << fmt_num(p.upper[u]) << '\n';
  }
  bool any_general = false, any_binary = false;
  for (int j = 0; j < p.num_vars; ++j)
    if (p.integer[static_cast<std::size_t>(j)]) (p.is_binary(j) ? any_binary : any_general) = true;
  if (any_general) {
    os << "GENERAL\n ";
    for (int j = 0; j < p.num_vars; ++j)
      if (p.integer[static_cast<std::size_t>(j)] && !p.is_binary(j))
        os << p.var_names[static_cast<std::size_t>(j)] << ' ';
    os << '\n';
  }
  if (any_binary) {
    os << "BINARY\n ";
    for (int j = 0; j < p.num_vars; ++j)
      if (p.is_binary(j)) os << p.var_names[static_cast<std::size_t>(j)] << ' ';
    os << '\n';
  }
  os << "END\n";
}

inline std::string write_cip(const Problem& p) {
  std::ostringstream os;
  write_cip(os, p);
  return os.str();
}

inline Problem parse_cip_string(const std::string& text, const std::string& name = "problem") {
  std::istringstream is(text);
  return parse_cip(is, name);
}

inline Problem parse_mps_string(const std::string& text, const std::string& name = "problem") {
  std::istringstream is(text);
  return parse_mps(is, name);
}

}  // namespace cipkit

#endif  // CIPKIT_IO_HPP_
