#pragma once

#include <stdexcept>
#include <string>

namespace phonobath {

// Bad caller input: malformed parameters, unparsable files, invalid options.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A value fell outside the domain where an operation is defined
// (negative DOS under a square root, log of a nonpositive J, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The requested method cannot handle this model/spec combination.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace phonobath
