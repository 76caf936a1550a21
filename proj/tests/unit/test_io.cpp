#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "mbt/errors.hpp"
#include "mbt/io.hpp"

using namespace mbt;

TEST_SUITE("io") {
  TEST_CASE("model JSON round trip is exact") {
    const auto m = fixture::example("example2");
    const auto text = io::model_to_json(m);
    const auto back = io::model_from_json(text);
    CHECK(back.D0 == m.D0);
    CHECK(back.D1 == m.D1);
    CHECK(back.d == m.d);
    CHECK(back.alpha == m.alpha);
    REQUIRE(back.atmmpp.has_value());
    CHECK(back.atmmpp->lambda == m.atmmpp->lambda);
    CHECK(io::model_to_json(back) == text);
  }

  TEST_CASE("model JSON errors") {
    CHECK_THROWS_AS(io::model_from_json("{"), ParseError);
    CHECK_THROWS_AS(io::model_from_json(R"({"n": 1})"), ParseError);
    CHECK_THROWS_AS(io::model_from_json(R"({"n":1,"alpha":[1],"D0":[[-1]],"D1":[[0.5]],"d":[0.1]})"),
                    StructuralError);
    const auto from_params = io::model_from_json(R"({"atmmpp":{"gamma":[],"mu":[0.5],"lambda":[2]}})");
    CHECK(from_params.D0(0, 0) == -2.5);
  }

  TEST_CASE("format detection") {
    CHECK(io::detect_format("age,fertility,mortality\n0,1,0.1\n") == io::DataFormat::rates);
    CHECK(io::detect_format("\n1,2,-1\n0,0\n") == io::DataFormat::vectors_csv);
    CHECK(io::detect_format(R"({"vectors": [[1]]})") == io::DataFormat::vectors_json);
    CHECK_THROWS_AS(io::detect_format("x,y\n"), ParseError);
    CHECK(io::parse_format("rates") == io::DataFormat::rates);
    CHECK_THROWS_AS(io::parse_format("xml"), ParseError);
  }

  TEST_CASE("rates CSV with missing cells") {
    const auto r = io::parse_rates_csv("age,fertility,mortality,count\n0,,0.2,10\n5,1.5,,8\n");
    CHECK(r.class_length == 5.0);
    CHECK_FALSE(r.rows[0].fertility.has_value());
    CHECK(*r.rows[0].mortality == 0.2);
    CHECK_FALSE(r.rows[1].mortality.has_value());
    CHECK(*r.rows[1].count == 8.0);
    const auto again = io::parse_rates_csv(io::rates_to_csv(r));
    CHECK(again.rows.size() == 2);
    CHECK(*again.rows[1].fertility == 1.5);
  }

  TEST_CASE("rates CSV errors carry line numbers") {
    try {
      io::parse_rates_csv("age,fertility,mortality\n0,1,0.1\n1,abc,0.1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(io::parse_rates_csv("age,mortality,fertility\n0,1,0.1\n"), ParseError);
    CHECK_THROWS_AS(io::parse_rates_csv("age,fertility,mortality\n0,1\n"), ParseError);
  }

  TEST_CASE("life vector files") {
    const auto s = io::parse_vectors_csv("2,3,1,-1\n\n0,-2\n", 2.0);
    CHECK(s.size() == 2);
    CHECK(s.class_length == 2.0);
    CHECK(io::parse_vectors_csv(io::vectors_to_csv(s), 2.0).vectors == s.vectors);
    const auto j = io::parse_vectors_json(io::vectors_to_json(s));
    CHECK(j.vectors == s.vectors);
    CHECK(j.class_length == 2.0);
    try {
      io::parse_vectors_csv("1,2\n1,-1,3\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(io::parse_vectors_csv("1,x\n"), ParseError);
  }

  TEST_CASE("curve CSV layout") {
    DemographicCurves c{{0.0, 1.0}, {0.1, 0.2}, {1.0, 1.0 / 3.0}, {1.0, 0.9}};
    CHECK(io::curves_to_csv(c) == "age,mortality,fertility,survival\n0,0.1,1,1\n1,0.2,0.333333333333333,0.9\n");
  }

  TEST_CASE("atomic writes") {
    const auto dir = std::filesystem::temp_directory_path() / "mbt_io_test";
    std::filesystem::remove_all(dir);
    io::write_atomic(dir / "a" / "x.txt", "hello");
    CHECK(io::read_file(dir / "a" / "x.txt") == "hello");
    CHECK_FALSE(std::filesystem::exists(dir / "a" / "x.txt.tmp"));
    CHECK_THROWS_AS(io::read_file(dir / "missing"), IoError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("shortest round-trip numbers") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
  }
}
