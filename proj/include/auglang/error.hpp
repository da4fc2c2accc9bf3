#pragma once

#include <stdexcept>
#include <string>

namespace auglang {

// Base for every error the toolkit raises. `code()` is a stable snake_case
// identifier that the CLI reports in its machine-readable error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace auglang
