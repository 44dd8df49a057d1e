#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace acharm {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMetric : Error {
    using Error::Error;
};

struct DomainViolation : Error {
    using Error::Error;
};

// Carries which structure axiom failed, where, and by how much.
struct AxiomViolation : Error {
    std::string axiom;
    std::vector<double> point;
    double residual = 0.0;
    AxiomViolation(std::string ax, std::vector<double> p, double r, const std::string& what)
        : Error(what), axiom(std::move(ax)), point(std::move(p)), residual(r) {}
};

struct NotInD : Error {
    using Error::Error;
};

struct NotContactMetric : Error {
    using Error::Error;
};

struct NotApplicable : Error {
    using Error::Error;
};

struct NotSubmersive : Error {
    using Error::Error;
};

struct UnknownEntry : Error {
    using Error::Error;
};

struct ParamOutOfRange : Error {
    using Error::Error;
};

struct EpsilonOutOfRange : Error {
    using Error::Error;
};

struct NonPositiveWarp : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Expression parse failure: byte offset plus the token classes that would
// have been accepted at that position.
struct ParseError : Error {
    std::size_t offset;
    std::vector<std::string> expected;
    ParseError(std::size_t off, std::vector<std::string> exp, const std::string& what)
        : Error(what), offset(off), expected(std::move(exp)) {}
};

struct EvalError : Error {
    using Error::Error;
};

struct UnboundVariable : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace acharm
