#pragma once

#include <stdexcept>
#include <string>

namespace phrg {

// Caller handed us something that breaks a stated precondition.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TypeMismatch : public Error {
public:
    using Error::Error;
};

class UnknownLabel : public Error {
public:
    explicit UnknownLabel(const std::string& label)
        : Error("unknown label '" + label + "'"), label_(label) {}
    const std::string& label() const { return label_; }

private:
    std::string label_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Input is well-formed but outside the shapes a construction handles.
class UnsupportedShape : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : Error(msg), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace phrg
