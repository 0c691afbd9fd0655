#pragma once

#include <stdexcept>
#include <string>

namespace bjkit {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  not_hermitian,
  inconclusive,   // an iteration cap was hit or a tolerance could not be met
  inconsistency,  // two routes that must agree did not
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::not_hermitian: return "not_hermitian";
    case ErrorCode::inconclusive: return "inconclusive";
    case ErrorCode::inconsistency: return "inconsistency";
  }
  return "unknown";
}

// Fixed cap shared by every iterative loop in the library.
inline constexpr int kIterationCap = 10000;

}  // namespace bjkit
