#pragma once

#include <cstdint>
#include <string>

#include "lsskit/assembly.hpp"
#include "lsskit/dynamics.hpp"
#include "lsskit/trajectory.hpp"

namespace lss {

/// One sensitivity evaluation plus the metadata needed to reproduce it.
struct SensitivityResult {
    double djds = 0.0;
    double jbar = 0.0;
    double T = 0.0;
    double dt = 0.0;
    double alpha2 = 0.0;
    SchemeOrder scheme = SchemeOrder::SecondOrder;
    std::string bc_desc = "homogeneous";
    std::uint64_t seed = 0;
    double lambda_min = std::numeric_limits<double>::quiet_NaN();

    static std::string csv_header();
    std::string csv_row() const;
};

/// Window average of J over [0, T]: the second-order midpoint-rule mean of J
/// at the stored midpoint states, (1/N) * sum_k J(u_{k+1/2}).
double time_average(const Trajectory& traj, const DynamicalSystem& sys);

/// Adjoint quadrature
///   dJbar/ds = (1/N) sum_k ((psi_k + psi_{k+1})/2)^T f_s|_{k+1/2} + j_s|_{k+1/2}.
SensitivityResult adjoint_sensitivity(const AdjointSolution& adj, const Trajectory& traj,
                                      const DynamicalSystem& sys);

/// Matching discretization of the forward sensitivity integral
///   dJbar/ds = (1/T) int J_u^T v + J_s + eta (J - Jbar) dt;
/// with homogeneous boundary data it reproduces the adjoint value to solver
/// tolerance (the two discrete problems are exact transposes).
SensitivityResult forward_sensitivity(const ForwardSolution& fwd, const Trajectory& traj,
                                      const DynamicalSystem& sys, double jbar);

}  // namespace lss
