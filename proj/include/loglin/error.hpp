#ifndef LOGLIN_ERROR_HPP
#define LOGLIN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace loglin {

// Numeric values are shared with the C API status codes in loglin.h.
enum class ErrorCode {
  InvalidArgument = 1,
  Parse = 2,
  Io = 3,
  NotDecomposable = 10,
  NotACycle = 11,
  DimensionTooLarge = 12,
  BoundaryOrOutside = 13,
  OutsidePolytope = 14,
  IncompleteFacets = 15,
  NotInModel = 16,
  NonComputable = 17,
  NonConvergence = 18,
  Singular = 19,
  WrongCone = 20,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace loglin

#endif  // LOGLIN_ERROR_HPP
