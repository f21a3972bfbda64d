#ifndef DELMAR_ERRORS_HPP
#define DELMAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace delmar {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape or argument problems detected before any arithmetic runs.
class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

class NonFiniteInput : public Error {
public:
    explicit NonFiniteInput(const std::string& msg) : Error(msg) {}
};

class NegativeThreshold : public Error {
public:
    explicit NegativeThreshold(const std::string& msg) : Error(msg) {}
};

class MatrixTooSmall : public Error {
public:
    explicit MatrixTooSmall(const std::string& msg) : Error(msg) {}
};

class VectorTooShort : public Error {
public:
    explicit VectorTooShort(const std::string& msg) : Error(msg) {}
};

class ZeroPrefix : public Error {
public:
    explicit ZeroPrefix(const std::string& msg) : Error(msg) {}
};

class DivisionByZero : public Error {
public:
    explicit DivisionByZero(const std::string& msg) : Error(msg) {}
};

class RankTooLarge : public Error {
public:
    explicit RankTooLarge(const std::string& msg) : Error(msg) {}
};

class InvalidConfig : public Error {
public:
    explicit InvalidConfig(const std::string& msg) : Error(msg) {}
};

class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& msg) : Error(msg) {}
};

class EmptySupport : public Error {
public:
    explicit EmptySupport(const std::string& msg) : Error(msg) {}
};

class InvalidSpec : public Error {
public:
    explicit InvalidSpec(const std::string& msg) : Error(msg) {}
};

// Numerical breakdown while iterating (NaN/Inf appeared in an iterate).
class NonFiniteIterate : public Error {
public:
    explicit NonFiniteIterate(const std::string& msg) : Error(msg) {}
};

// I/O failures: unreadable files, malformed headers, truncated payloads.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class MalformedHeader : public IoError {
public:
    explicit MalformedHeader(const std::string& msg) : IoError(msg) {}
};

class DimensionMismatch : public IoError {
public:
    explicit DimensionMismatch(const std::string& msg) : IoError(msg) {}
};

class NonFiniteValue : public IoError {
public:
    explicit NonFiniteValue(const std::string& msg) : IoError(msg) {}
};

} // namespace delmar

#endif
