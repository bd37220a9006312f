#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xdmev {

enum class ErrorCode {
  UnknownId,
  MissingRate,
  InvalidAmount,
  InsufficientBalance,
  InsufficientLiquidity,
  FeeExceedsOutput,
  PricesEqual,
  UnknownPool,
  AlreadyConsumed,
  NoOpportunity,
  ExplosionGuard,
  ParseError,
  ValidationError,
  Overflow,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Index of the failing step when raised while applying a sequence.
  const std::optional<std::size_t>& step() const noexcept { return step_; }
  Error at_step(std::size_t index) const {
    Error copy(code_, "step " + std::to_string(index) + ": " + detail());
    copy.step_ = index;
    return copy;
  }

  // Message without the leading code prefix.
  std::string detail() const {
    std::string_view full = what();
    auto prefix = to_string(code_).size() + 2;
    return std::string(full.size() >= prefix ? full.substr(prefix) : full);
  }

 private:
  ErrorCode code_;
  std::optional<std::size_t> step_;
};

// Raised by the scenario loader; carries every problem found, each naming a field.
class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(std::vector<std::string> issues)
      : Error(ErrorCode::ValidationError, join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& issue : issues) {
      if (!out.empty()) out += "; ";
      out += issue;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace xdmev
