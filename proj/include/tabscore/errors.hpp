#pragma once

#include <stdexcept>
#include <string>

namespace tabscore {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unclosed table markup.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Markup parsed but produced a table with no rows or no columns.
class EmptyTableError : public Error {
 public:
  using Error::Error;
};

/// Markup fragment without any <table> element.
class NoTableError : public Error {
 public:
  using Error::Error;
};

/// A TableGrid violates the cell-placement invariants.
class InvalidTableError : public Error {
 public:
  using Error::Error;
};

class InsufficientEvidenceError : public Error {
 public:
  using Error::Error;
};

/// Matching mode requires a field (bbox or markup) that an item lacks.
class ModeMismatchError : public Error {
 public:
  using Error::Error;
};

class CorpusMismatchError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive search requested on an input above its size cap.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

/// Bad user input: corpus lines, config files, image files.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace tabscore
