#ifndef SLNZ_ERRORS_HPP
#define SLNZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slnz {

// Base class for all toolkit errors. Subclasses distinguish usage errors
// (bad dimensions, bad flags) from verification failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

class NotUnimodularError : public Error {
public:
    explicit NotUnimodularError(const std::string& msg) : Error(msg) {}
};

class InvalidOpError : public Error {
public:
    explicit InvalidOpError(const std::string& msg) : Error(msg) {}
};

class PolicyError : public Error {
public:
    explicit PolicyError(const std::string& msg) : Error(msg) {}
};

// Search budget exhausted (prime searches are budgeted, never unbounded).
class BudgetError : public Error {
public:
    explicit BudgetError(const std::string& msg) : Error(msg) {}
};

class SizeError : public Error {
public:
    explicit SizeError(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

} // namespace slnz

#endif
