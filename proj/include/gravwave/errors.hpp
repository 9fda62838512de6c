#pragma once

#include <stdexcept>
#include <string>

namespace gravwave {

// Base class for all solver errors. The CLI maps subclasses to exit codes:
// input/contract problems -> 3, iteration failures -> 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidParameterError : public Error {
public:
    explicit InvalidParameterError(const std::string& msg) : Error(msg) {}
};

// Requested quantity needs the upper finite branch, which does not exist
// for the given parameters.
class NoUpperBranchError : public InvalidParameterError {
public:
    explicit NoUpperBranchError(const std::string& msg) : InvalidParameterError(msg) {}
};

class DomainError : public InvalidParameterError {
public:
    explicit DomainError(const std::string& msg) : InvalidParameterError(msg) {}
};

// Strip height too small to hold the requested profile.
class TruncationError : public InvalidParameterError {
public:
    explicit TruncationError(const std::string& msg) : InvalidParameterError(msg) {}
};

class ContractViolationError : public Error {
public:
    explicit ContractViolationError(const std::string& msg) : Error(msg) {}
};

class NonConvergenceError : public Error {
public:
    explicit NonConvergenceError(const std::string& msg) : Error(msg) {}
};

} // namespace gravwave
