#include <doctest.h>

#include <clocale>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdc/csv.hpp"
#include "rdc/rng.hpp"

using namespace rdc;

TEST_CASE("number format switches to scientific outside [1e-3, 1e6]") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(-2.25) == "-2.25");
  CHECK(format_number(1e6) == "1000000");
  CHECK(format_number(1e-3) == "0.001");
  CHECK(format_number(83.2e6) == "8.32e+07");
  CHECK(format_number(861e-9) == "8.61e-07");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.0 / 3.0 * 1e-6) == "6.66666666667e-07");
  CHECK(format_integer(-42) == "-42");
}

TEST_CASE("round-trip formatting is exact") {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.below(200)) - 100);
    CHECK(parse_double(format_roundtrip(x)) == x);
  }
}

TEST_CASE("strict parsing") {
  CHECK(parse_double(" 2.5e-3 ") == 2.5e-3);
  CHECK(parse_double("+7") == 7.0);
  CHECK_THROWS_AS(parse_double("1,5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("3V"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK(parse_integer("24") == 24);
  CHECK_THROWS_AS(parse_integer("2.5"), std::invalid_argument);
}

TEST_CASE("writer and reader") {
  CsvWriter w({"a", "b"});
  w.row({"1", "2"}).row({"3", "4"});
  CHECK(w.str() == "a,b\n1,2\n3,4\n");
  const CsvData d = parse_csv("a,b\n\n1,2\r\n3,4\n");
  CHECK(d.rows.size() == 2);
  CHECK(d.column("b") == 1);
  CHECK(d.rows[1][1] == "4");
  CHECK_THROWS_AS(d.column("c"), std::out_of_range);
  CHECK_THROWS(parse_csv("a,b\n1\n"));
}
