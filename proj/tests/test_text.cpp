// Formatting and parsing helpers. The renderer/extractor round trip and the
// CSV writers both lean on these, so exact output strings and strict
// rejection are pinned here.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include "trainkit/rng.hpp"
#include "trainkit/text.hpp"

using namespace trainkit;

TEST_CASE("fmt_double is the shortest round-tripping form") {
  CHECK(fmt_double(0.0) == "0");
  CHECK(fmt_double(1.0) == "1");
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(-2.25) == "-2.25");
  CHECK(fmt_double(104857.6) == "104857.6");
}

TEST_CASE("fmt_double_fixed stays in plain decimal notation") {
  CHECK(fmt_double_fixed(0.00025) == "0.00025");
  CHECK(fmt_double_fixed(0.000025) == "0.000025");
  CHECK(fmt_double_fixed(1.0) == "1");
  CHECK(fmt_double_fixed(12.5) == "12.5");
  CHECK(fmt_double_fixed(1e-7).find('e') == std::string::npos);
}

TEST_CASE("fmt_grouped groups by thousands") {
  CHECK(fmt_grouped(0) == "0");
  CHECK(fmt_grouped(7) == "7");
  CHECK(fmt_grouped(999) == "999");
  CHECK(fmt_grouped(1000) == "1_000");
  CHECK(fmt_grouped(244140) == "244_140");
  CHECK(fmt_grouped(500000000) == "500_000_000");
  CHECK(fmt_grouped(126953125) == "126_953_125");
  CHECK(fmt_grouped(1234567890123ULL) == "1_234_567_890_123");
}

TEST_CASE("fmt_hms pads to two digits but lets hours grow") {
  CHECK(fmt_hms(0) == "00:00:00");
  CHECK(fmt_hms(1200) == "00:20:00");
  CHECK(fmt_hms(86399) == "23:59:59");
  CHECK(fmt_hms(360000) == "100:00:00");
}

TEST_CASE("parse_u64 accepts grouping and nothing else") {
  CHECK(parse_u64("0") == 0);
  CHECK(parse_u64("244_140") == 244140);
  CHECK(parse_u64("18446744073709551615") == 18446744073709551615ULL);
  CHECK_FALSE(parse_u64(""));
  CHECK_FALSE(parse_u64("_"));
  CHECK_FALSE(parse_u64("12x"));
  CHECK_FALSE(parse_u64("-1"));
  CHECK_FALSE(parse_u64("1.5"));
  CHECK_FALSE(parse_u64(" 1"));
  CHECK_FALSE(parse_u64("1 "));
  CHECK_FALSE(parse_u64("18446744073709551616"));
}

TEST_CASE("parse_f64 rejects trailing garbage") {
  CHECK(parse_f64("0.00025") == 0.00025);
  CHECK(parse_f64("-3.5") == -3.5);
  CHECK(parse_f64("1e3") == 1000.0);
  CHECK_FALSE(parse_f64(""));
  CHECK_FALSE(parse_f64("abc"));
  CHECK_FALSE(parse_f64("1.5 "));
  CHECK_FALSE(parse_f64("1,5"));
}

TEST_CASE("parse_hms bounds minutes and seconds") {
  CHECK(parse_hms("00:20:00") == 1200);
  CHECK(parse_hms("23:59:59") == 86399);
  CHECK(parse_hms("100:00:00") == 360000);
  CHECK_FALSE(parse_hms("00:60:00"));
  CHECK_FALSE(parse_hms("00:00:60"));
  CHECK_FALSE(parse_hms("20:00"));
  CHECK_FALSE(parse_hms("aa:00:00"));
  CHECK_FALSE(parse_hms(""));
}

TEST_CASE("trim and split") {
  CHECK(trim("  a b \t\r\n") == "a b");
  CHECK(trim("") == "");
  CHECK(trim("   ") == "");
  auto parts = split("a|b||c", '|');
  REQUIRE(parts.size() == 4);
  CHECK(parts[0] == "a");
  CHECK(parts[1] == "b");
  CHECK(parts[2] == "");
  CHECK(parts[3] == "c");
  CHECK(split("", ',').size() == 1);
  CHECK(split("x,", ',').size() == 2);
}

TEST_CASE("double formatting round-trips bit-exactly") {
  SplitMix64 rng(2024);
  int tried = 0;
  for (int i = 0; i < 4000; ++i) {
    std::uint64_t bits = rng.next_u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    ++tried;
    auto back = parse_f64(fmt_double(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
  CHECK(tried > 3000);
  for (int i = 0; i < 4000; ++i) {
    double v = (rng.next_unit() - 0.5) * 1e6;
    auto back = parse_f64(fmt_double_fixed(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
}

TEST_CASE("integer and walltime formatting round-trip") {
  SplitMix64 rng(7);
  for (int i = 0; i < 4000; ++i) {
    std::uint64_t v = rng.next_u64();
    CHECK(parse_u64(fmt_grouped(v)) == v);
    std::uint64_t seconds = rng.next_u64() % 1000000;
    CHECK(parse_hms(fmt_hms(seconds)) == seconds);
  }
}
