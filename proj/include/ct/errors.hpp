#pragma once

#include <stdexcept>
#include <string>

namespace ct {

// Exit codes used by the command-line front end.
enum class ExitCode : int {
  ok = 0,
  parse_error = 2,
  model_mismatch = 3,
  precondition = 4,
  internal = 5,
  regime = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ExitCode::parse_error, w) {}
};

struct ModelMismatch : Error {
  explicit ModelMismatch(const std::string& w)
      : Error(ExitCode::model_mismatch, w) {}
};

struct PreconditionFailure : Error {
  explicit PreconditionFailure(const std::string& w)
      : Error(ExitCode::precondition, w) {}
};

// A projection to an annulus whose core misses one of the inputs.
struct UndefinedProjection : PreconditionFailure {
  explicit UndefinedProjection(const std::string& w) : PreconditionFailure(w) {}
};

// Raised when an input claimed to be almost-fixed carries an orbit of
// large data that is not symmetric.
struct SymmetryViolation : PreconditionFailure {
  explicit SymmetryViolation(const std::string& w) : PreconditionFailure(w) {}
};

struct InternalAssertion : Error {
  explicit InternalAssertion(const std::string& w)
      : Error(ExitCode::internal, w) {}
};

struct RegimeViolation : Error {
  explicit RegimeViolation(const std::string& w) : Error(ExitCode::regime, w) {}
};

inline void check(bool cond, const char* what) {
  if (!cond) throw InternalAssertion(what);
}

}  // namespace ct
