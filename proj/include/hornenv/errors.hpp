#pragma once

#include <stdexcept>
#include <string>

namespace hornenv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a precondition (width mismatch, index out of range, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// A brute-force oracle was asked to enumerate more variables than its cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t width, std::size_t cap)
      : Error("brute-force enumeration over " + std::to_string(width) +
              " variables exceeds cap of " + std::to_string(cap)),
        width_(width),
        cap_(cap) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t width_;
  std::size_t cap_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// The peer sent something that does not follow the wire protocol.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& what, std::string payload)
      : Error(what), payload_(std::move(payload)) {}

  const std::string& payload() const noexcept { return payload_; }

 private:
  std::string payload_;
};

// I/O failure talking to an external oracle. The query may be retried on a
// fresh connection.
class TransportError : public Error {
 public:
  using Error::Error;
  bool retryable() const noexcept { return true; }
};

}  // namespace hornenv
