#include <doctest.h>

#include "formula_fuzz.hpp"
#include "netglm/error.hpp"
#include "netglm/formula.hpp"

using namespace netglm;

namespace {

std::size_t error_offset(const std::string& text) {
  try {
    parse_formula(text);
  } catch (const FormulaError& e) {
    return e.offset();
  }
  return std::string::npos;
}

}  // namespace

TEST_SUITE("formula") {
  TEST_CASE("parses terms, modes and arguments") {
    ModelSpec s = parse_formula(
        "data.object ~ attribute_y + cov_z(data = match_gender, mode = 'local') + gwesp(type = \"ISP\", decay = 1.5)");
    REQUIRE(s.terms.size() == 3);
    CHECK(s.terms[0].name == "attribute_y");
    CHECK(s.terms[1].covariate == "match_gender");
    CHECK(s.terms[1].mode == Mode::local);
    CHECK(s.terms[2].type == PathType::isp);
    CHECK(s.terms[2].decay == 1.5);
    CHECK(s.terms[1].label() == "cov_z(data = match_gender, mode = 'local')");
    CHECK(s.terms[2].label() == "gwesp(type = 'ISP', decay = 1.5)");
  }

  TEST_CASE("defaults are filled in but not shown") {
    ModelSpec s = parse_formula("gwesp + transitive + spillover_yy");
    CHECK(s.terms[0].decay == kDefaultDecay);
    CHECK(s.terms[0].type == PathType::otp);
    CHECK(s.terms[0].label() == "gwesp");
    CHECK(s.terms[1].mode == Mode::local);
    CHECK(s.terms[2].mode == Mode::local);
    CHECK(parse_formula("~ edges").terms[0].mode == Mode::global);
  }

  TEST_CASE("errors carry the offending byte offset") {
    CHECK(error_offset("") == 0);
    CHECK(error_offset("edges + nosuch") == 8);
    CHECK(error_offset("edges(mode = 'sideways')") == 13);
    CHECK(error_offset("mutual(mode = 'local', mode = 'global')") == 23);
    CHECK(error_offset("edges + edges(mode = 'global')") == 8);
    CHECK(error_offset("edges(decay = 1)") == 6);
    CHECK(error_offset("gwesp(decay = -1)") == 14);
    CHECK(error_offset("gwesp(type = 'XYZ')") == 13);
    CHECK(error_offset("cov_z") == 0);
    CHECK(error_offset("cov_z(data = 3)") == 13);
    CHECK(error_offset("edges(mode = 'local'") == 20);
    CHECK(error_offset("edges mutual") == 6);
    CHECK(error_offset("edges(foo = 1)") == 6);
    CHECK(error_offset("spillover_yy(mode = 'global')") == 20);
    CHECK(error_offset("isolates(mode = 'local')") == 9);
    CHECK(error_offset("gwesp(decay = 1.2.3)") == 14);
    CHECK(error_offset("cov_y(data = 'unterminated)") == 13);
  }

  TEST_CASE("render and parse round-trip on generated formulas") {
    SplitMix64 rng(17);
    for (int k = 0; k < 2000; ++k) {
      std::string text = testing::random_valid_formula(rng);
      CAPTURE(text);
      ModelSpec s = parse_formula(text);
      CHECK(parse_formula(render_formula(s)) == s);
      CHECK(render_formula(parse_formula(render_formula(s))) == render_formula(s));
    }
  }

  TEST_CASE("invalid input only ever produces located errors") {
    SplitMix64 rng(23);
    for (int k = 0; k < 5000; ++k) {
      std::string text = testing::random_invalid_formula(rng);
      CAPTURE(text);
      try {
        parse_formula(text);
      } catch (const FormulaError& e) {
        CHECK(e.offset() <= text.size());
      }
    }
  }
}
