#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include <rlink/io.hpp>

using namespace rlink;

namespace {

const char* kTc = R"({
  "label": "tc",
  "degree": 3,
  "coeffs": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
  "orientation": 1
})";

}  // namespace

TEST_CASE("curve document round-trips") {
    auto c = curve_from_json_text(kTc);
    CHECK(c.label == "tc");
    CHECK(c.degree() == 3);
    CHECK(c.orientation == 1);
    CHECK(c.coords.rows[2].coeff(2) == 1.0);
    CHECK(c.coords.rows[2].coeff(1) == 0.0);
}

TEST_CASE("rational coefficient strings are exact") {
    auto c = curve_from_json_text(R"({
      "label": "r", "degree": 1,
      "coeffs": [["1/3", 0], ["-2/7", 1], [0, "5/2"], [1, 0]],
      "orientation": -1
    })");
    CHECK(c.coords.rows[0].coeff(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c.coords.rows[1].coeff(0) == doctest::Approx(-2.0 / 7.0).epsilon(1e-15));
    CHECK(c.coords.rows[2].coeff(1) == doctest::Approx(2.5));
    CHECK(c.orientation == -1);

    CHECK(parse_rational("3/4", "f") == doctest::Approx(0.75));
    CHECK(parse_rational("-1.5e2", "f") == doctest::Approx(-150.0));
    CHECK_THROWS_AS(parse_rational("1/0", "f"), InputError);
    CHECK_THROWS_AS(parse_rational("abc", "f"), InputError);
}

TEST_CASE("errors name the offending field") {
    // malformed JSON
    CHECK_THROWS_AS(curve_from_json_text("{nope"), InputError);
    // missing label
    CHECK_THROWS_WITH_AS(curve_from_json_text(R"({"degree":1,
        "coeffs":[[0,1],[1,0],[0,0],[0,0]],"orientation":1})"),
                         doctest::Contains("label"), InputError);
    // short row
    CHECK_THROWS_WITH_AS(curve_from_json_text(R"({"label":"x","degree":3,
        "coeffs":[[1,0,0,0],[0,1,0,0],[0,0,1],[0,0,0,1]],"orientation":1})"),
                         doctest::Contains("coeffs[2]"), InputError);
    // wrong row count
    CHECK_THROWS_WITH_AS(curve_from_json_text(R"({"label":"x","degree":1,
        "coeffs":[[1,0],[0,1],[0,0]],"orientation":1})"),
                         doctest::Contains("coeffs"), InputError);
    // bad orientation
    CHECK_THROWS_WITH_AS(curve_from_json_text(R"({"label":"x","degree":1,
        "coeffs":[[1,0],[0,1],[0,0],[0,0]],"orientation":2})"),
                         doctest::Contains("orientation"), InputError);
    // bad degree
    CHECK_THROWS_WITH_AS(curve_from_json_text(R"({"label":"x","degree":0,
        "coeffs":[[1],[1],[1],[1]],"orientation":1})"),
                         doctest::Contains("degree"), InputError);
    // missing file
    CHECK_THROWS_AS(load_curve_file("/nonexistent/path.json"), InputError);
}

TEST_CASE("family document parses with per-coefficient lambda polynomials") {
    auto f = family_from_json_text(R"({
      "label": "fam", "degree": 1,
      "lambda_coeffs": [[[2, 3], [1]], [[1], [0]], [[0], [1]], [[1], [0]]],
      "range": [-0.5, 0.5],
      "orientation": 1
    })");
    CHECK(f.label == "fam");
    CHECK(f.degree == 1);
    CHECK(f.lo == -0.5);
    CHECK(f.hi == 0.5);
    auto c = f.curve_at(1.0);
    CHECK(c.coords.rows[0].coeff(0) == doctest::Approx(5.0));

    CHECK_THROWS_WITH_AS(family_from_json_text(R"({
      "label": "fam", "degree": 1,
      "lambda_coeffs": [[[1], [1]], [[1], [0]], [[0], [1]], [[1], [0]]],
      "range": [0.5, -0.5], "orientation": 1})"),
                         doctest::Contains("range"), InputError);
}
