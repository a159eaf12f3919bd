#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fever_forge {

// Base for every error the toolkit raises. Inapplicability (a rule that does
// not match, a missing optional value) is never an error; it is an empty
// std::optional.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A malformed record in a line-oriented input file. Line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& reason)
      : Error(source + ":" + std::to_string(line) + ": " + reason),
        source_(std::move(source)),
        line_(line),
        reason_(reason) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string reason_;
};

}  // namespace fever_forge
