#ifndef TORICNET_ERRORS_HPP
#define TORICNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace toricnet {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical or grammatical problem in the reaction DSL, or an unknown species.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0, int col = 0)
        : Error(format(msg, line, col)), line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    static std::string format(const std::string& msg, int line, int col);
    int line_;
    int col_;
};

// Structurally invalid network (self-loop complex, duplicate edge).
class StructureError : public Error {
public:
    using Error::Error;
};

// A connected component is not strongly connected (some tree constant vanishes,
// or no positive balanced flux exists).
class NotWeaklyReversible : public Error {
public:
    using Error::Error;
};

// Rate vector fails the complex-balance consistency test.
class NotInToricLocus : public Error {
public:
    NotInToricLocus(const std::string& msg, double residual = 0.0)
        : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// The augmented log-linear system is numerically singular.
class SingularSystem : public Error {
public:
    using Error::Error;
};

// Newton iteration did not reach the requested gradient tolerance.
class MaxIterations : public Error {
public:
    MaxIterations(const std::string& msg, double final_grad_norm)
        : Error(msg), final_grad_norm_(final_grad_norm) {}
    double final_grad_norm() const { return final_grad_norm_; }

private:
    double final_grad_norm_;
};

// A basis expected to be orthonormal is not.
class DegenerateBasis : public Error {
public:
    using Error::Error;
};

// Flux vector violates the vertex balance condition beyond tolerance.
class UnbalancedFlux : public Error {
public:
    using Error::Error;
};

// A state vector left the open positive orthant.
class NonPositiveState : public Error {
public:
    using Error::Error;
};

// The integrator cannot resolve the solution with any representable step.
class StepSizeUnderflow : public Error {
public:
    using Error::Error;
};

}  // namespace toricnet

#endif
