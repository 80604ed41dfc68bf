#pragma once

#include <stdexcept>
#include <string>

namespace biflab {

// Error taxonomy shared by the C++ core and the C API status codes.
enum class ErrorCode {
  invalid_argument,
  out_of_domain,
  root_finding_failure,
  degenerate_sample,
  degenerate_lattice,
  degeneration_on_disc,
  continuation_broken,
  budget_exceeded,
  anomaly_no_intersection,
  degenerate_cloud,
  insufficient_pairs,
  io_error,
  bad_config,
  internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace biflab
