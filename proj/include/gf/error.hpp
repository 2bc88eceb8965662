#pragma once

#include <stdexcept>
#include <string>

namespace gf {

// Every failure surfaced by the library carries a stable kebab-case code
// (e.g. "invalid-config", "unknown-profile") plus a human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)), detail_(detail) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string code_;
    std::string detail_;
};

} // namespace gf
