// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace kmr {

// Date arithmetic or conversion left the range covered by the bundled table.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A (year, month, leap, day) combination that does not exist in the table.
class InvalidDateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Knowledge-base lookup with an unknown key.
class MissingEntryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (e.g. current_year < birth_year).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Judge output without a valid correct/step token pair.
class MalformedVerdictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// HTTP request that kept failing after bounded retries.
class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// OLS with a constant predictor.
class SingularFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kmr
