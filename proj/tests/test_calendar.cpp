// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kmr/calendar.hpp"
#include "kmr/errors.hpp"
#include "kmr/rng.hpp"

using namespace kmr;

namespace {

const LunisolarTable& table() {
  static const LunisolarTable t =
      LunisolarTable::load(std::string(KMR_DATA_DIR_FOR_TESTS) + "/lunisolar_ko.tsv");
  return t;
}

// Pure Gregorian day-walk, independent of std::chrono.
bool gregorian_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int gregorian_month_length(int y, int m) {
  static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && gregorian_leap(y)) return 29;
  return lengths[m - 1];
}

SolarDate naive_next_day(SolarDate d) {
  if (++d.day > gregorian_month_length(d.year, d.month)) {
    d.day = 1;
    if (++d.month > 12) {
      d.month = 1;
      ++d.year;
    }
  }
  return d;
}

SolarDate naive_prev_day(SolarDate d) {
  if (--d.day == 0) {
    if (--d.month == 0) {
      d.month = 12;
      --d.year;
    }
    d.day = gregorian_month_length(d.year, d.month);
  }
  return d;
}

SolarDate naive_add_days(SolarDate d, int n) {
  while (n > 0) {
    d = naive_next_day(d);
    --n;
  }
  while (n < 0) {
    d = naive_prev_day(d);
    ++n;
  }
  return d;
}

}  // namespace

TEST_CASE("table loads with verified checksum and plausible bounds") {
  const auto& t = table();
  CHECK(t.first_year() == 1900);
  CHECK(t.last_year() == 2049);
  CHECK(t.anchor_of_year(1900) == SolarDate{1900, 1, 31});
  CHECK(t.anchor_of_year(1999) == SolarDate{1999, 2, 16});
  CHECK(t.anchor_of_year(2000) == SolarDate{2000, 2, 5});
  CHECK(t.anchor_of_year(2025) == SolarDate{2025, 1, 29});
}

TEST_CASE("tampered table is rejected by the checksum") {
  const std::string src = std::string(KMR_DATA_DIR_FOR_TESTS) + "/lunisolar_ko.tsv";
  std::ifstream in(src);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  const auto at = text.find("1999-02-16");
  REQUIRE(at != std::string::npos);
  text[at + 9] = '7';  // 1999-02-16 -> 1999-02-17

  const auto tmp = std::filesystem::temp_directory_path() / "kmr_tampered_table.tsv";
  std::ofstream(tmp) << text;
  CHECK_THROWS_AS(LunisolarTable::load(tmp.string()), ParseError);
  std::filesystem::remove(tmp);
}

TEST_CASE("solar/lunar conversion matches the published reference day") {
  const LunarDate lunar = table().solar_to_lunar({1999, 2, 28});
  CHECK(lunar == LunarDate{1999, 1, 13, false});
  CHECK(table().lunar_to_solar({1999, 1, 13, false}) == SolarDate{1999, 2, 28});
  CHECK(table().solar_to_lunar({2000, 2, 5}) == LunarDate{2000, 1, 1, false});
}

TEST_CASE("every year's anchor day is lunar new year's day") {
  for (int y = table().first_year(); y <= table().last_year(); ++y) {
    CHECK(table().solar_to_lunar(table().anchor_of_year(y)) == LunarDate{y, 1, 1, false});
  }
}

TEST_CASE("add_days handles the reference arithmetic") {
  CHECK(table().add_days({1999, 1, 2}, 57) == SolarDate{1999, 2, 28});
  CHECK(table().add_days({1999, 1, 2}, 0) == SolarDate{1999, 1, 2});
  CHECK(table().add_days({1999, 2, 28}, -57) == SolarDate{1999, 1, 2});
  CHECK(naive_add_days({1999, 2, 28}, -57) == SolarDate{1999, 1, 2});
}

TEST_CASE("add_days agrees with a naive day walk on random cases") {
  SplitMix64 rng(0x5eedu);
  for (int i = 0; i < 10000; ++i) {
    const int64_t span = table().last_serial() - table().first_serial();
    const SolarDate d = serial_to_solar(table().first_serial() + rng.between(200, span - 200));
    const int n = static_cast<int>(rng.between(-150, 150));
    CHECK(table().add_days(d, n) == naive_add_days(d, n));
  }
}

TEST_CASE("add_days is additive and strictly monotone") {
  SplitMix64 rng(0xadd5u);
  for (int i = 0; i < 10000; ++i) {
    const int64_t span = table().last_serial() - table().first_serial();
    const SolarDate d = serial_to_solar(table().first_serial() + rng.between(400, span - 400));
    const int a = static_cast<int>(rng.between(-180, 180));
    const int b = static_cast<int>(rng.between(-180, 180));
    CHECK(table().add_days(table().add_days(d, a), b) == table().add_days(d, a + b));
    if (a < b) {
      CHECK(table().add_days(d, a) < table().add_days(d, b));
    }
  }
}

TEST_CASE("month lengths bridge consecutive anchors") {
  const auto& rows = table().rows();
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    int64_t sum = 0;
    for (const int len : rows[i].month_lengths) sum += len;
    CHECK(rows[i].anchor_serial + sum == rows[i + 1].anchor_serial);
  }
}

// The oracle below is the independent check for both conversion
// directions: a single linear walk over every covered civil day.
TEST_CASE("conversions agree with the brute-force day walk over the full range") {
  int64_t serial = table().first_serial();
  int64_t mismatches = 0;
  for (const auto& row : table().rows()) {
    for (size_t slot = 0; slot < row.month_lengths.size(); ++slot) {
      int month = static_cast<int>(slot) + 1;
      bool leap = false;
      if (row.leap_month != 0 && month > row.leap_month) {
        --month;
        leap = (month == row.leap_month && slot == static_cast<size_t>(row.leap_month));
      }
      for (int day = 1; day <= row.month_lengths[slot]; ++day, ++serial) {
        const SolarDate solar = serial_to_solar(serial);
        const LunarDate expected{row.year, month, day, leap};
        if (!(table().solar_to_lunar(solar) == expected)) ++mismatches;
        if (solar_to_serial(table().lunar_to_solar(expected)) != serial) ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
  CHECK(serial == table().last_serial() + 1);
}

TEST_CASE("round trip identity on sampled days") {
  SplitMix64 rng(0xc0ffee);
  const int64_t span = table().last_serial() - table().first_serial();
  for (int i = 0; i < 10000; ++i) {
    const SolarDate d = serial_to_solar(table().first_serial() + rng.between(0, span));
    CHECK(table().lunar_to_solar(table().solar_to_lunar(d)) == d);
  }
}

TEST_CASE("leap months are distinct dates that round trip") {
  const int leap_month = table().leap_month_of(1900);
  REQUIRE(leap_month == 8);
  const SolarDate plain = table().lunar_to_solar({1900, 8, 1, false});
  const SolarDate leap = table().lunar_to_solar({1900, 8, 1, true});
  CHECK(plain != leap);
  CHECK(table().solar_to_lunar(plain) == LunarDate{1900, 8, 1, false});
  CHECK(table().solar_to_lunar(leap) == LunarDate{1900, 8, 1, true});
}

TEST_CASE("out-of-range and nonexistent dates raise typed errors") {
  CHECK_THROWS_AS(table().solar_to_lunar({1899, 12, 31}), RangeError);
  CHECK_THROWS_AS(table().solar_to_lunar({2050, 6, 1}), RangeError);
  CHECK_THROWS_AS(table().add_days({2050, 2, 1}, 60), RangeError);
  CHECK_THROWS_AS(table().add_days({1900, 2, 1}, -5), RangeError);
  CHECK_THROWS_AS(table().lunar_to_solar({1999, 5, 1, true}), InvalidDateError);  // no leap 5th
  CHECK_THROWS_AS(table().lunar_to_solar({1999, 1, 31, false}), InvalidDateError);
  CHECK_THROWS_AS(table().lunar_to_solar({1999, 2, 30, false}), InvalidDateError);  // 29-day month

  try {
    table().add_days({2050, 2, 1}, 60);
    CHECK(false);
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("supported solar range") != std::string::npos);
  }
}

TEST_CASE("trace-style date rendering") {
  CHECK(format_solar({1999, 2, 28}) == "1999.2.28");
  CHECK(format_lunar({1999, 1, 13, false}) == "1999.1.13");
  CHECK(format_lunar({1900, 8, 5, true}) == "1900.윤8.5");
  CHECK(format_date(CalendarDate::from(SolarDate{1999, 1, 2})) == "1999.1.2");
}
