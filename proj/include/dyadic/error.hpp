#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

/// Failure categories. Each maps onto one CLI exit code.
enum class ErrorKind {
  Contract,     // caller broke a documented precondition (sizes, intervals)
  Input,        // non-finite or otherwise invalid data
  Domain,       // parameter outside the admissible range
  Range,        // index or time outside the represented window
  Numeric,      // integrator / root finder / eigen solver failure
  Search,       // find_q exhausted its grid
  Calibration,  // profile calibration could not verify the spectrum
  Divergence,   // Galerkin solution exceeded the blow-up threshold
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

const char* to_string(ErrorKind kind) noexcept;

}  // namespace dyadic
