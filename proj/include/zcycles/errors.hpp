#pragma once

#include <stdexcept>
#include <string>

namespace zcycles {

// A product point left the declared support window.
class SupportCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegreeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class PreconditionViolated : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace zcycles
