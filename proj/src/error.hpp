#pragma once

#include <stdexcept>
#include <string>

namespace qgd {

enum class Errc {
    invalid_argument,  // bad shapes, unparseable input, contract violations
    io,                // missing/unreadable files
    numerical,         // degenerate gap, ill-conditioned loop, non-convergence
    validation,        // a validation check evaluated and failed
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace qgd
