#include "regipm/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace regipm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

double parse_number(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s + tok.size()) return v;
  // Fortran-style exponents occasionally show up in old files.
  std::string fixed = tok;
  for (char& ch : fixed)
    if (ch == 'D' || ch == 'd') ch = 'E';
  s = fixed.c_str();
  v = std::strtod(s, &end);
  if (end == s + fixed.size()) return v;
  throw ParseError(line, "malformed numeric field '" + tok + "'");
}

enum class Section { None, Name, Rows, Columns, Rhs, Ranges, Bounds, QuadObj, Done };

}  // namespace

MpsModel parse_mps(std::string_view text) {
  MpsModel model;
  std::unordered_map<std::string, int> row_index;
  std::unordered_map<std::string, int> col_index;
  bool saw_rows = false, saw_columns = false, saw_objective = false;

  auto column_of = [&](const std::string& name) {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    int idx = model.num_cols();
    col_index.emplace(name, idx);
    model.col_names.push_back(name);
    model.objective.push_back(0.0);
    model.lower.push_back(0.0);
    model.upper.push_back(kInf);
    return idx;
  };

  Section section = Section::None;
  std::istringstream stream{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const bool header = line[0] != ' ' && line[0] != '\t';
    auto toks = tokenize(line);
    if (header) {
      const std::string& sec = toks[0];
      if (sec == "NAME") {
        section = Section::Name;
        if (toks.size() > 1) model.name = toks[1];
      } else if (sec == "ROWS") {
        section = Section::Rows;
        saw_rows = true;
      } else if (sec == "COLUMNS") {
        if (!saw_rows) throw ParseError(lineno, "COLUMNS before ROWS");
        section = Section::Columns;
        saw_columns = true;
      } else if (sec == "RHS") {
        section = Section::Rhs;
      } else if (sec == "RANGES") {
        section = Section::Ranges;
      } else if (sec == "BOUNDS") {
        section = Section::Bounds;
      } else if (sec == "QUADOBJ") {
        section = Section::QuadObj;
      } else if (sec == "ENDATA") {
        section = Section::Done;
        break;
      } else {
        throw ParseError(lineno, "unknown section '" + sec + "'");
      }
      continue;
    }

    switch (section) {
      case Section::Rows: {
        if (toks.size() != 2) throw ParseError(lineno, "ROWS line needs type and name");
        std::string type = toks[0];
        std::transform(type.begin(), type.end(), type.begin(), ::toupper);
        const std::string& name = toks[1];
        if (type == "N") {
          if (saw_objective)
            throw ParseError(lineno, "duplicate objective row '" + name + "'");
          saw_objective = true;
          model.objective_name = name;
          break;
        }
        RowKind kind;
        if (type == "E")
          kind = RowKind::Equal;
        else if (type == "L")
          kind = RowKind::LessEqual;
        else if (type == "G")
          kind = RowKind::GreaterEqual;
        else
          throw ParseError(lineno, "unknown row type '" + toks[0] + "'");
        if (row_index.count(name)) throw ParseError(lineno, "duplicate row '" + name + "'");
        row_index.emplace(name, model.num_rows());
        model.row_names.push_back(name);
        model.row_kinds.push_back(kind);
        model.rhs.push_back(0.0);
        model.range.push_back(kNaN);
        break;
      }
      case Section::Columns: {
        if (toks.size() >= 3 && toks[1].find("MARKER") != std::string::npos) break;
        if (toks.size() < 3 || toks.size() % 2 == 0)
          throw ParseError(lineno, "COLUMNS line needs column plus (row, value) pairs");
        int col = column_of(toks[0]);
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          double v = parse_number(toks[i + 1], lineno);
          if (toks[i] == model.objective_name) {
            model.objective[col] += v;
            continue;
          }
          auto it = row_index.find(toks[i]);
          if (it == row_index.end())
            throw ParseError(lineno, "unknown row '" + toks[i] + "'");
          model.entries.push_back({it->second, col, v});
        }
        break;
      }
      case Section::Rhs:
      case Section::Ranges: {
        std::size_t start = toks.size() % 2 == 1 ? 1 : 0;  // optional set name
        if (toks.size() - start < 2)
          throw ParseError(lineno, "RHS/RANGES line needs (row, value) pairs");
        for (std::size_t i = start; i + 1 < toks.size(); i += 2) {
          double v = parse_number(toks[i + 1], lineno);
          if (section == Section::Rhs && toks[i] == model.objective_name) {
            model.objective_constant = -v;
            continue;
          }
          auto it = row_index.find(toks[i]);
          if (it == row_index.end())
            throw ParseError(lineno, "unknown row '" + toks[i] + "'");
          if (section == Section::Rhs)
            model.rhs[it->second] = v;
          else
            model.range[it->second] = v;
        }
        break;
      }
      case Section::Bounds: {
        if (toks.size() < 2) throw ParseError(lineno, "short BOUNDS line");
        std::string type = toks[0];
        std::transform(type.begin(), type.end(), type.begin(), ::toupper);
        const bool valued =
            type == "UP" || type == "LO" || type == "FX" || type == "UI" || type == "LI";
        const bool flag = type == "FR" || type == "MI" || type == "PL" || type == "BV";
        if (!valued && !flag) throw ParseError(lineno, "unknown bound type '" + toks[0] + "'");
        std::string colname;
        double value = 0.0;
        if (valued) {
          if (toks.size() == 4) {
            colname = toks[2];
            value = parse_number(toks[3], lineno);
          } else if (toks.size() == 3) {
            colname = toks[1];
            value = parse_number(toks[2], lineno);
          } else {
            throw ParseError(lineno, "malformed BOUNDS line");
          }
        } else {
          colname = toks.size() >= 3 ? toks[2] : toks[1];
        }
        auto it = col_index.find(colname);
        if (it == col_index.end())
          throw ParseError(lineno, "bound on unknown column '" + colname + "'");
        int col = it->second;
        if (type == "UP" || type == "UI")
          model.upper[col] = value;
        else if (type == "LO" || type == "LI")
          model.lower[col] = value;
        else if (type == "FX")
          model.lower[col] = model.upper[col] = value;
        else if (type == "FR") {
          model.lower[col] = -kInf;
          model.upper[col] = kInf;
        } else if (type == "MI")
          model.lower[col] = -kInf;
        else if (type == "PL")
          model.upper[col] = kInf;
        else if (type == "BV") {
          model.lower[col] = 0.0;
          model.upper[col] = 1.0;
        }
        break;
      }
      case Section::QuadObj: {
        if (toks.size() != 3) throw ParseError(lineno, "QUADOBJ line needs col col value");
        auto it1 = col_index.find(toks[0]);
        auto it2 = col_index.find(toks[1]);
        if (it1 == col_index.end() || it2 == col_index.end())
          throw ParseError(lineno, "QUADOBJ references unknown column");
        double v = parse_number(toks[2], lineno);
        int i = it1->second, j = it2->second;
        if (i < j) std::swap(i, j);  // keep the lower triangle
        model.quad.push_back({i, j, v});
        break;
      }
      case Section::Name:
        break;
      case Section::None:
      case Section::Done:
        throw ParseError(lineno, "data line outside any section");
    }
  }
  if (!saw_rows) throw ParseError(lineno, "missing ROWS section");
  if (!saw_columns) throw ParseError(lineno, "missing COLUMNS section");
  if (!saw_objective) throw ParseError(lineno, "no objective (N) row");
  return model;
}

MpsModel parse_mps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_mps(ss.str());
}

}  // namespace regipm
