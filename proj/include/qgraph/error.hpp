#pragma once

#include <stdexcept>
#include <string>

namespace qgraph {

/// Base class for all library errors. `exit_code` maps to the CLI contract:
/// 2 for input/specification problems, 3 for numerical failures.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code) : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

class InputError : public Error {
public:
    explicit InputError(std::string msg) : Error(std::move(msg), 2) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(std::string msg) : Error(std::move(msg), 3) {}
};

/// The f basis is ill-defined: the bond has a Dirichlet eigenvalue at -gamma.
class DirichletResonance : public NumericalError {
public:
    explicit DirichletResonance(std::string msg) : NumericalError(std::move(msg)) {}
};

/// The g basis is ill-defined: the bond has a Neumann eigenvalue at -gamma.
class NeumannResonance : public NumericalError {
public:
    explicit NeumannResonance(std::string msg) : NumericalError(std::move(msg)) {}
};

} // namespace qgraph
