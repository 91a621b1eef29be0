#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace lss {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Arguments violate an interface contract (dimension mismatch, bad range, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Trajectory integration left the admissible region (|u|_inf > blow_up_limit).
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double time_of_failure)
        : std::runtime_error(what), time(time_of_failure) {}
    double time;
};

/// A factorization hit a non-positive pivot; the operand is not SPD.
class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative method exhausted its iteration budget.
class ConvergenceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lss
