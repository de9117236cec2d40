#pragma once

#include <stdexcept>
#include <string>

namespace stf {

/// Invalid argument values: bad dimensions, out-of-range parameters, count mismatches.
class parameter_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unreadable files.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure, e.g. an eigensolver that did not converge.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace stf
