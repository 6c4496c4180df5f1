#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace giweyl {

enum class Errc {
  chart_mismatch,
  eps_underflow,
  domain_error,
  parse_error,
  chart_mixing,
  negative_power,
  not_reducible_to_j,
  field_present,
  domain_violation,
  word_present,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Parse errors carry a 1-based character position into the input text.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(Errc::parse_error, msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace giweyl
