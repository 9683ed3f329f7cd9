#pragma once

#include <stdexcept>
#include <string>

namespace padic {

// Raised when a computation cannot be decided within the allowed precision
// (epoch cap reached, strategy exhausted, divisor indistinguishable from zero).
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a recursion budget (root/factor separation depth) runs out.
class depth_error : public std::runtime_error {
public:
    explicit depth_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace padic
