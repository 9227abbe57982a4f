#pragma once

#include <stdexcept>
#include <string>

namespace gridexp {

// Base of every error raised by the library. Subclasses name the contract
// that was violated; callers that only care about "bad input" catch Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class OutOfBounds : public Error {
public:
    using Error::Error;
};

class NoBorderline : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class NotPresent : public Error {
public:
    using Error::Error;
};

// A protocol produced a decision that is not closed under the symmetries of
// the observer's view, or targets a non-adjacent node.
class OrbitViolation : public Error {
public:
    using Error::Error;
};

class SchedulerContract : public Error {
public:
    using Error::Error;
};

class InvalidInitial : public Error {
public:
    using Error::Error;
};

class UnsupportedInstance : public Error {
public:
    using Error::Error;
};

class ClassificationGap : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

}  // namespace gridexp
