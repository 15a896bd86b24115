#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gup {

/// Error for physically invalid inputs or regimes (imaginary root, caustic,
/// convergence failure, ...). Carries a stable machine-readable code so the
/// CLI can emit structured error objects.
class physics_error : public std::runtime_error {
public:
  physics_error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

} // namespace gup
