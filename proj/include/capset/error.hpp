#pragma once

#include <stdexcept>
#include <string>

namespace capset {

enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch = 2,
  parse_error = 3,
  io_error = 4,
  budget_exceeded = 5,
  domain_error = 6,
  not_a_capset = 7,
  internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace capset
