#pragma once

#include <stdexcept>
#include <string>

namespace nsdecay {

/// Bad configuration text or values (CLI exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver blow-up or stability-bound violation (CLI exit status 3).
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, long row) : std::runtime_error(what), row_(row) {}
  /// Index of the last completed series row (-1 before the first sample).
  [[nodiscard]] long row() const { return row_; }

 private:
  long row_;
};

}  // namespace nsdecay
