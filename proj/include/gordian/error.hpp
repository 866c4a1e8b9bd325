#pragma once

#include <stdexcept>
#include <string>

namespace gordian {

enum class ErrorKind {
  Validation,
  Domain,
  Capacity,
  IllConditioned,
  NonGeneric,
  Degenerate,
  Infeasible,
  RelaxationFailed,
  Numerical,
  ScheduleInfeasible,
  Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

// Process exit codes shared by every CLI subcommand.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kParse = 1;
inline constexpr int kDomain = 2;
inline constexpr int kNegativeVerdict = 3;
inline constexpr int kNumerical = 4;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

}  // namespace gordian
