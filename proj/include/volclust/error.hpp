#pragma once

#include <stdexcept>
#include <string>

namespace volclust {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data or arguments violate a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical computation produced a non-finite or otherwise unusable value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Wraps an error raised inside a pipeline stage with the stage name.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what, bool numeric)
      : Error(stage + ": " + what), stage_(std::move(stage)), numeric_(numeric) {}

  const std::string& stage() const noexcept { return stage_; }
  bool numeric() const noexcept { return numeric_; }

 private:
  std::string stage_;
  bool numeric_;
};

}  // namespace volclust
