// Exception types thrown across the library.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chipscore {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad argument value).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A Score or voice invariant does not hold (range, monophony, note length).
class ScoreError : public Error {
 public:
  using Error::Error;
};

/// Malformed Standard MIDI File. offset() is the byte position of the fault.
class MidiParseError : public Error {
 public:
  MidiParseError(std::size_t offset, const std::string& message)
      : Error("MIDI parse error at byte " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Event ID outside the vocabulary at position() in a decoded sequence.
class DecodeError : public Error {
 public:
  DecodeError(std::size_t position, const std::string& message)
      : Error("decode error at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Text file (token or likelihood format) rejected; line() is 1-based.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Binary n-gram model file rejected.
class ModelFormatError : public Error {
 public:
  enum class Kind { kBadMagic, kVersionMismatch, kTruncated, kCorrupt };

  ModelFormatError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace chipscore
