#pragma once

#include <stdexcept>
#include <string>

namespace asplund {

/// Raised for violated preconditions, malformed inputs and I/O failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace asplund
