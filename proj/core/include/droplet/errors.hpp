#pragma once

#include <stdexcept>
#include <string>

namespace droplet {

// Bad inputs: parameters, configs, preconditions the caller can fix.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluation outside the domain of a function (F at r <= 0, V at |x| >= a,
// interior evaluation at a point outside the curve, graph extraction miss).
class OutOfDomain : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Failures of the numerical pipeline itself. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDomain : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IllConditionedSolve : public NumericalError {
public:
    IllConditionedSolve(const std::string& what, double condition, double residual)
        : NumericalError(what), condition_(condition), residual_(residual) {}

    double condition() const { return condition_; }
    double residual() const { return residual_; }

private:
    double condition_;
    double residual_;
};

class InvalidLaw : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class SearchFailure : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class FilletTooLarge : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

}  // namespace droplet
