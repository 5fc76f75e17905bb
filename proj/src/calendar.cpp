// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/calendar.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "kmr/errors.hpp"
#include "kmr/rng.hpp"

#ifndef KMR_DEFAULT_DATA_DIR
#define KMR_DEFAULT_DATA_DIR "data"
#endif

namespace kmr {

const char* to_string(CalendarKind kind) {
  return kind == CalendarKind::solar ? "solar" : "lunar";
}

CalendarKind calendar_kind_from_string(const std::string& s) {
  if (s == "solar") return CalendarKind::solar;
  if (s == "lunar") return CalendarKind::lunar;
  throw ParseError("unknown calendar kind: " + s);
}

int64_t solar_to_serial(SolarDate d) {
  using namespace std::chrono;
  const year_month_day ymd{year{d.year}, month{static_cast<unsigned>(d.month)},
                           day{static_cast<unsigned>(d.day)}};
  return sys_days{ymd}.time_since_epoch().count();
}

SolarDate serial_to_solar(int64_t serial) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{serial}}};
  return {static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())),
          static_cast<int>(static_cast<unsigned>(ymd.day()))};
}

bool solar_valid(SolarDate d) {
  using namespace std::chrono;
  return year_month_day{year{d.year}, month{static_cast<unsigned>(d.month)},
                        day{static_cast<unsigned>(d.day)}}
      .ok();
}

std::string format_solar(SolarDate d) {
  return std::to_string(d.year) + "." + std::to_string(d.month) + "." + std::to_string(d.day);
}

std::string format_lunar(LunarDate d) {
  std::string month = d.leap_month ? "윤" + std::to_string(d.month) : std::to_string(d.month);
  return std::to_string(d.year) + "." + month + "." + std::to_string(d.day);
}

std::string format_date(const CalendarDate& d) {
  return d.kind == CalendarKind::solar ? format_solar(d.solar()) : format_lunar(d.lunar());
}

std::string to_hex(uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

SolarDate parse_iso_date(const std::string& s, int line_no) {
  const auto parts = split(s, '-');
  if (parts.size() != 3) throw ParseError("bad date: " + s, line_no);
  return {std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2])};
}

}  // namespace

LunisolarTable LunisolarTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lunisolar table: " + path);

  LunisolarTable table;
  std::string line;
  std::string declared_checksum;
  std::vector<std::string> data_lines;
  int line_no = 0;
  bool saw_magic = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# korean-lunisolar-table v1", 0) == 0) saw_magic = true;
      if (line.rfind("# fnv1a64 ", 0) == 0) declared_checksum = line.substr(10);
      continue;
    }
    data_lines.push_back(line);

    const auto fields = split(line, '\t');
    if (fields.size() != 4) throw ParseError("expected 4 tab-separated fields", line_no);

    LunarYearRow row;
    row.year = std::stoi(fields[0]);
    row.anchor = parse_iso_date(fields[1], line_no);
    row.anchor_serial = solar_to_serial(row.anchor);
    row.leap_month = std::stoi(fields[2]);
    for (const auto& len : split(fields[3], ',')) {
      row.month_lengths.push_back(std::stoi(len));
    }

    const size_t expected = row.leap_month == 0 ? 12 : 13;
    if (row.month_lengths.size() != expected)
      throw ParseError("year " + fields[0] + ": expected " + std::to_string(expected) + " months",
                       line_no);
    if (row.leap_month < 0 || row.leap_month > 12)
      throw ParseError("year " + fields[0] + ": leap month out of range", line_no);

    int64_t start = row.anchor_serial;
    for (int len : row.month_lengths) {
      if (len != 29 && len != 30)
        throw ParseError("year " + fields[0] + ": month length " + std::to_string(len), line_no);
      row.month_starts.push_back(start);
      start += len;
    }
    table.rows_.push_back(std::move(row));
  }

  if (!saw_magic) throw ParseError("missing table header magic in " + path);
  if (table.rows_.empty()) throw ParseError("empty lunisolar table: " + path);
  if (declared_checksum.empty()) throw ParseError("missing fnv1a64 checksum header in " + path);

  std::string joined;
  for (size_t i = 0; i < data_lines.size(); ++i) {
    if (i) joined += '\n';
    joined += data_lines[i];
  }
  table.checksum_ = fnv1a64(joined);
  if (to_hex(table.checksum_) != declared_checksum)
    throw ParseError("lunisolar table checksum mismatch: computed " + to_hex(table.checksum_) +
                     ", header says " + declared_checksum);

  for (size_t i = 0; i < table.rows_.size(); ++i) {
    const auto& row = table.rows_[i];
    if (row.year != table.rows_.front().year + static_cast<int>(i))
      throw ParseError("years not contiguous at " + std::to_string(row.year));
    const int64_t sum =
        std::accumulate(row.month_lengths.begin(), row.month_lengths.end(), int64_t{0});
    if (i + 1 < table.rows_.size() &&
        row.anchor_serial + sum != table.rows_[i + 1].anchor_serial)
      throw ParseError("month lengths of " + std::to_string(row.year) +
                       " do not reach the next year's anchor");
    if (i + 1 == table.rows_.size()) table.end_serial_ = row.anchor_serial + sum;
  }
  return table;
}

std::string LunisolarTable::range_message() const {
  return "supported solar range is " + format_solar(serial_to_solar(first_serial())) + " to " +
         format_solar(serial_to_solar(last_serial()));
}

bool LunisolarTable::contains(SolarDate d) const {
  if (!solar_valid(d)) return false;
  const int64_t s = solar_to_serial(d);
  return s >= first_serial() && s < end_serial_;
}

const LunarYearRow& LunisolarTable::row_of(int lunar_year) const {
  if (lunar_year < first_year() || lunar_year > last_year())
    throw RangeError("lunar year " + std::to_string(lunar_year) + " not covered; " +
                     range_message());
  return rows_[static_cast<size_t>(lunar_year - first_year())];
}

bool LunisolarTable::contains(LunarDate d) const {
  if (d.year < first_year() || d.year > last_year()) return false;
  const auto& row = rows_[static_cast<size_t>(d.year - first_year())];
  if (d.month < 1 || d.month > 12) return false;
  if (d.leap_month && row.leap_month != d.month) return false;
  const size_t slot = static_cast<size_t>(d.month - 1) +
                      ((row.leap_month != 0 && (d.month > row.leap_month || d.leap_month)) ? 1 : 0);
  return d.day >= 1 && d.day <= row.month_lengths[slot];
}

SolarDate LunisolarTable::add_days(SolarDate d, int64_t n) const {
  if (!contains(d))
    throw RangeError("date " + format_solar(d) + " outside table; " + range_message());
  const int64_t target = solar_to_serial(d) + n;
  if (target < first_serial() || target >= end_serial_)
    throw RangeError("adding " + std::to_string(n) + " days to " + format_solar(d) +
                     " leaves the table; " + range_message());
  return serial_to_solar(target);
}

LunarDate LunisolarTable::solar_to_lunar(SolarDate d) const {
  if (!contains(d))
    throw RangeError("date " + format_solar(d) + " outside table; " + range_message());
  const int64_t s = solar_to_serial(d);

  auto it = std::upper_bound(rows_.begin(), rows_.end(), s,
                             [](int64_t v, const LunarYearRow& row) { return v < row.anchor_serial; });
  const auto& row = *std::prev(it);

  auto mit = std::upper_bound(row.month_starts.begin(), row.month_starts.end(), s);
  const size_t slot = static_cast<size_t>(std::distance(row.month_starts.begin(), mit)) - 1;

  int month = static_cast<int>(slot) + 1;
  bool leap = false;
  if (row.leap_month != 0 && month > row.leap_month) {
    --month;
    leap = (month == row.leap_month && slot == static_cast<size_t>(row.leap_month));
  }
  return {row.year, month, static_cast<int>(s - row.month_starts[slot]) + 1, leap};
}

SolarDate LunisolarTable::lunar_to_solar(LunarDate d) const {
  const auto& row = row_of(d.year);
  if (d.month < 1 || d.month > 12 || (d.leap_month && row.leap_month != d.month))
    throw InvalidDateError("lunar date " + format_lunar(d) + " does not exist");
  const size_t slot = static_cast<size_t>(d.month - 1) +
                      ((row.leap_month != 0 && (d.month > row.leap_month || d.leap_month)) ? 1 : 0);
  if (d.day < 1 || d.day > row.month_lengths[slot])
    throw InvalidDateError("lunar date " + format_lunar(d) + " does not exist (month has " +
                           std::to_string(row.month_lengths[slot]) + " days)");
  return serial_to_solar(row.month_starts[slot] + d.day - 1);
}

CalendarDate LunisolarTable::convert(const CalendarDate& d, CalendarKind target) const {
  if (d.kind == target) return d;
  if (target == CalendarKind::lunar) return CalendarDate::from(solar_to_lunar(d.solar()));
  return CalendarDate::from(lunar_to_solar(d.lunar()));
}

SolarDate LunisolarTable::anchor_of_year(int lunar_year) const { return row_of(lunar_year).anchor; }

int LunisolarTable::leap_month_of(int lunar_year) const { return row_of(lunar_year).leap_month; }

int LunisolarTable::months_in_year(int lunar_year) const {
  return static_cast<int>(row_of(lunar_year).month_lengths.size());
}

int LunisolarTable::month_length(int lunar_year, int month, bool leap) const {
  const auto& row = row_of(lunar_year);
  if (month < 1 || month > 12 || (leap && row.leap_month != month))
    throw InvalidDateError("no such month in lunar year " + std::to_string(lunar_year));
  const size_t slot = static_cast<size_t>(month - 1) +
                      ((row.leap_month != 0 && (month > row.leap_month || leap)) ? 1 : 0);
  return row.month_lengths[slot];
}

std::string default_data_dir() {
  if (const char* env = std::getenv("KMR_DATA_DIR"); env && *env) return env;
  return KMR_DEFAULT_DATA_DIR;
}

LunisolarTable load_default_table() {
  return LunisolarTable::load(default_data_dir() + "/lunisolar_ko.tsv");
}

}  // namespace kmr
