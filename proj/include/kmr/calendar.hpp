// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Korean lunisolar calendar engine backed by the bundled year table
// (data/lunisolar_ko.tsv). Conversions are a bijection between civil days
// and lunar dates over the covered range; all arithmetic is in civil days.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kmr {

struct SolarDate {
  int year = 0;
  int month = 0;  // 1-12
  int day = 0;    // 1-31
  auto operator<=>(const SolarDate&) const = default;
};

struct LunarDate {
  int year = 0;
  int month = 0;  // 1-12
  int day = 0;    // 1-30
  bool leap_month = false;
  auto operator<=>(const LunarDate&) const = default;
};

enum class CalendarKind { solar, lunar };

const char* to_string(CalendarKind kind);
CalendarKind calendar_kind_from_string(const std::string& s);

// A date tagged with the calendar it is expressed in; the unit carried by
// question traces.
struct CalendarDate {
  CalendarKind kind = CalendarKind::solar;
  int year = 0;
  int month = 0;
  int day = 0;
  bool leap_month = false;  // lunar only

  static CalendarDate from(SolarDate d) { return {CalendarKind::solar, d.year, d.month, d.day, false}; }
  static CalendarDate from(LunarDate d) { return {CalendarKind::lunar, d.year, d.month, d.day, d.leap_month}; }
  SolarDate solar() const { return {year, month, day}; }
  LunarDate lunar() const { return {year, month, day, leap_month}; }
  auto operator<=>(const CalendarDate&) const = default;
};

// Civil-day serial numbers (days since 1970-01-01, proleptic Gregorian).
int64_t solar_to_serial(SolarDate d);
SolarDate serial_to_solar(int64_t serial);
bool solar_valid(SolarDate d);

// "1999.2.28" / "1999.1.13" / "1999.윤5.4", the rendering used in traces.
std::string format_solar(SolarDate d);
std::string format_lunar(LunarDate d);
std::string format_date(const CalendarDate& d);

struct LunarYearRow {
  int year = 0;
  SolarDate anchor;                   // solar date of lunar (year, 1, 1)
  int64_t anchor_serial = 0;
  int leap_month = 0;                 // 0 = none
  std::vector<int> month_lengths;     // calendar order, leap month inserted after its base
  std::vector<int64_t> month_starts;  // serial of each month slot's first day
};

class LunisolarTable {
 public:
  static LunisolarTable load(const std::string& path);

  int first_year() const { return rows_.front().year; }
  int last_year() const { return rows_.back().year; }
  int64_t first_serial() const { return rows_.front().anchor_serial; }
  int64_t last_serial() const { return end_serial_ - 1; }
  uint64_t checksum() const { return checksum_; }
  const std::vector<LunarYearRow>& rows() const { return rows_; }

  bool contains(SolarDate d) const;
  bool contains(LunarDate d) const;

  // n civil days after d (before, if negative); both ends range-checked.
  SolarDate add_days(SolarDate d, int64_t n) const;

  LunarDate solar_to_lunar(SolarDate d) const;
  SolarDate lunar_to_solar(LunarDate d) const;
  CalendarDate convert(const CalendarDate& d, CalendarKind target) const;

  SolarDate anchor_of_year(int lunar_year) const;  // lunar new year
  int leap_month_of(int lunar_year) const;         // 0 = none
  int month_length(int lunar_year, int month, bool leap) const;
  int months_in_year(int lunar_year) const;

 private:
  const LunarYearRow& row_of(int lunar_year) const;
  std::string range_message() const;

  std::vector<LunarYearRow> rows_;
  int64_t end_serial_ = 0;  // one past the last covered serial
  uint64_t checksum_ = 0;
};

// Directory holding the bundled data files: $KMR_DATA_DIR when set,
// otherwise the location baked in at configure time.
std::string default_data_dir();
LunisolarTable load_default_table();

}  // namespace kmr
