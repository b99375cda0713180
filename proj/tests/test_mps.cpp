#include <cmath>
#include <limits>

#include "doctest.h"
#include "regipm/mps.hpp"

using namespace regipm;

namespace {
const std::string kFixtures = REGIPM_FIXTURE_DIR;
}

TEST_CASE("golden parse of the tiny LP fixture") {
  auto m = parse_mps_file(kFixtures + "/tiny_lp.mps");
  CHECK(m.name == "TINYLP");
  CHECK(m.objective_name == "COST");
  REQUIRE(m.num_rows() == 1);
  CHECK(m.row_names[0] == "R1");
  CHECK(m.row_kinds[0] == RowKind::Equal);
  REQUIRE(m.num_cols() == 2);
  CHECK(m.col_names[0] == "X1");
  CHECK(m.objective[0] == 1.0);
  CHECK(m.objective[1] == 2.0);
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].row == 0);
  CHECK(m.entries[0].col == 0);
  CHECK(m.entries[0].value == 1.0);
  CHECK(m.entries[1].row == 0);
  CHECK(m.entries[1].col == 1);
  CHECK(m.entries[1].value == 1.0);
  CHECK(m.rhs[0] == 2.0);
  CHECK(!m.is_qp());
}

TEST_CASE("golden parse of the tiny QP fixture") {
  auto m = parse_mps_file(kFixtures + "/tiny_qp.qps");
  REQUIRE(m.is_qp());
  REQUIRE(m.quad.size() == 3);
  // Lower triangle, in file order.
  CHECK(m.quad[0].row == 0);
  CHECK(m.quad[0].col == 0);
  CHECK(m.quad[0].value == 2.0);
  CHECK(m.quad[1].row == 1);
  CHECK(m.quad[1].col == 0);
  CHECK(m.quad[1].value == -2.0);
  CHECK(m.quad[2].row == 1);
  CHECK(m.quad[2].col == 1);
  CHECK(m.quad[2].value == 4.0);
}

TEST_CASE("QUADOBJ normalizes either triangle to lower storage") {
  std::string text =
      "NAME T\n"
      "ROWS\n N OBJ\n E R1\n"
      "COLUMNS\n    X1 R1 1.0\n    X2 R1 1.0\n"
      "RHS\n    RHS R1 1.0\n"
      "QUADOBJ\n    X1 X2 5.0\n"
      "ENDATA\n";
  auto m = parse_mps(text);
  REQUIRE(m.quad.size() == 1);
  CHECK(m.quad[0].row == 1);
  CHECK(m.quad[0].col == 0);
  CHECK(m.quad[0].value == 5.0);
}

TEST_CASE("bounds section") {
  auto m = parse_mps_file(kFixtures + "/tiny_bounds.mps");
  CHECK(m.lower[1] == 0.0);
  CHECK(m.upper[1] == 4.0);
  CHECK(m.lower[2] == -std::numeric_limits<double>::infinity());
  CHECK(m.upper[2] == std::numeric_limits<double>::infinity());
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("missing ROWS") {
    std::string text = "NAME X\nCOLUMNS\n    C1 R1 1.0\nENDATA\n";
    CHECK_THROWS_AS(parse_mps(text), ParseError);
  }
  SUBCASE("unknown section") {
    std::string text = "NAME X\nROWS\n N OBJ\nOBJSENSE\n MAX\nENDATA\n";
    try {
      parse_mps(text);
      FAIL("expected throw");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
  }
  SUBCASE("duplicate objective row") {
    std::string text = "ROWS\n N OBJ\n N OBJ2\nCOLUMNS\nENDATA\n";
    CHECK_THROWS_WITH_AS(parse_mps(text), doctest::Contains("duplicate objective"), ParseError);
  }
  SUBCASE("malformed numeric") {
    std::string text = "ROWS\n N OBJ\n E R1\nCOLUMNS\n    X1 R1 1.0x\nRHS\nENDATA\n";
    try {
      parse_mps(text);
      FAIL("expected throw");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
    }
  }
  SUBCASE("unknown row in COLUMNS") {
    std::string text = "ROWS\n N OBJ\n E R1\nCOLUMNS\n    X1 R9 1.0\nENDATA\n";
    CHECK_THROWS_AS(parse_mps(text), ParseError);
  }
}

TEST_CASE("fortran exponents and objective RHS constant") {
  std::string text =
      "NAME T\n"
      "ROWS\n N OBJ\n E R1\n"
      "COLUMNS\n    X1 OBJ 1.5D+1 R1 1.0\n"
      "RHS\n    RHS R1 2.0 OBJ 3.0\n"
      "ENDATA\n";
  auto m = parse_mps(text);
  CHECK(m.objective[0] == 15.0);
  CHECK(m.objective_constant == -3.0);
}

TEST_CASE("ranges recorded per row") {
  std::string text =
      "NAME T\n"
      "ROWS\n N OBJ\n G R1\n L R2\n"
      "COLUMNS\n    X1 R1 1.0 R2 1.0\n"
      "RHS\n    RHS R1 1.0 R2 8.0\n"
      "RANGES\n    RNG R1 2.0\n"
      "ENDATA\n";
  auto m = parse_mps(text);
  CHECK(m.range[0] == 2.0);
  CHECK(std::isnan(m.range[1]));
}
