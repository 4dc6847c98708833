#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spmvtk {

enum class ErrorCode {
  InvalidArgument,
  Validation,
  MemoryLimit,
  Io,
  Parse,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace spmvtk
