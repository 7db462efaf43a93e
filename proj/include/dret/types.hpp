// Shared aliases, error types and the unit convention
//
// Units: hbar = 1. Every energy is an angular frequency expressed in units of a
// reference dipolar coupling J_ref, and every time is in units of 1/J_ref.
// Temperatures enter as k_B T / hbar in the same units.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dret {

using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

// Input parameters that violate a documented invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Integrator failures, non-physical states, convergence failures.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dret
