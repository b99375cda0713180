#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "regipm/sparse.hpp"

namespace regipm {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class RowKind { Equal, LessEqual, GreaterEqual };

// Raw problem as read from an MPS/QPS file: rows, columns, rhs, ranges,
// bounds and (for QPS) the lower triangle of Q. No transformation applied.
struct MpsModel {
  std::string name;
  std::string objective_name;
  std::vector<std::string> row_names;
  std::vector<RowKind> row_kinds;
  std::vector<std::string> col_names;
  std::vector<double> objective;      // per column
  std::vector<Triplet> entries;       // constraint coefficients
  std::vector<double> rhs;            // per row, default 0
  std::vector<double> range;          // per row, NaN when absent
  double objective_constant = 0.0;    // minus the RHS given on the objective row
  std::vector<double> lower, upper;   // per-column bounds, default [0, +inf)
  std::vector<Triplet> quad;          // lower triangle of Q (QUADOBJ)

  int num_rows() const { return static_cast<int>(row_names.size()); }
  int num_cols() const { return static_cast<int>(col_names.size()); }
  bool is_qp() const { return !quad.empty(); }
};

// Whitespace-tokenized parse; accepts both fixed and free field layouts.
MpsModel parse_mps(std::string_view text);
MpsModel parse_mps_file(const std::string& path);

}  // namespace regipm
