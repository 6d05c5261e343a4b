#pragma once

#include <stdexcept>
#include <string>

namespace regrid {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad arguments, unreadable files, invalid JSON.
class parse_error : public error {
public:
    using error::error;
};

// Two layouts (or a layout and its data) do not describe the same extent.
class extent_error : public error {
public:
    using error::error;
};

// A computation was refused because it would be too large (e.g. n! search).
class resource_error : public error {
public:
    using error::error;
};

// Distributed result differs from the dense reference.
class verification_error : public error {
public:
    using error::error;
};

} // namespace regrid
