#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lsskit/dynamics.hpp"
#include "lsskit/solver.hpp"
#include "lsskit/trajectory.hpp"
#include "lsskit/types.hpp"

namespace lss {

/// Temporal discretization of the shadowing boundary-value system.
/// SecondOrder couples node differences with midpoint-averaged Jacobians;
/// FirstOrder uses one-sided differences with node Jacobians.
enum class SchemeOrder { FirstOrder = 1, SecondOrder = 2 };

int order_of(SchemeOrder scheme);

struct LssConfig {
    double alpha2 = 1.0;           // time-dilation weight, > 0
    SchemeOrder scheme = SchemeOrder::SecondOrder;
    Vec bc0;                       // adjoint value at t = 0; empty = homogeneous
    Vec bcT;                       // adjoint value at t = T; empty = homogeneous

    /// Constant boundary vectors c*(1,...,1) in dimension n.
    static LssConfig constant_bc(double alpha2, SchemeOrder scheme, double c, int n);
};

/// The adjoint shadowing system after blockwise elimination of the auxiliary
/// multiplier r: an SPD block-tridiagonal operator acting on the interior
/// adjoint nodes, its right-hand side, and the per-interval data needed to
/// reconstruct r from the solved adjoint.
///
/// Interval row k (k = 0..N-1) carries the blocks A_k, B_k of the first
/// discrete equation  r_row_k = A_k psi_k + B_k psi_{k+1} + j_u[k]; the
/// eliminated matrix has diagonal blocks
///   D_i = A_i^T A_i + B_{i-1}^T B_{i-1} + f_i f_i^T / alpha2
/// and couplings E_i = A_i^T B_i between nodes i and i+1.
class LssSystem {
public:
    int block_dim() const { return n_; }
    int num_interior() const { return matrix_.num_blocks(); }
    int n_steps() const { return n_steps_; }
    double dt() const { return dt_; }
    double alpha2() const { return alpha2_; }
    double jbar() const { return jbar_; }
    SchemeOrder scheme() const { return scheme_; }

    const BlockTridiagonalMatrix& matrix() const { return matrix_; }
    const std::vector<Vec>& rhs() const { return rhs_; }
    const Vec& bc0() const { return bc0_; }
    const Vec& bcT() const { return bcT_; }

    const Mat& a_block(int k) const { return a_[k]; }
    const Mat& b_block(int k) const { return b_[k]; }
    const Vec& j_u_row(int k) const { return ju_[k]; }
    /// Node velocity f_i, i = 1..N-1 (plus i = N for the first-order scheme).
    const Vec& f_node(int i) const { return fnode_[i]; }
    /// Node value of J entering the time-dilation right-hand side.
    double j_node(int i) const { return jnode_[i]; }

    /// Boundary coupling blocks E_0 = A_0^T B_0 and E_{N-1} (used to move
    /// boundary data to the right-hand side).
    const Mat& boundary_block_0() const { return e_first_; }
    const Mat& boundary_block_T() const { return e_last_; }

    /// First-order scheme only: I/dt - f_u at node N, the operator of the
    /// trailing time-dilation row that recovers r_N.
    const Mat& trailing_matrix() const { return trailing_; }

    friend LssSystem assemble_adjoint(const Trajectory&, const DynamicalSystem&,
                                      const LssConfig&, double);
    friend void apply_bc(LssSystem& system, const Vec& bc0, const Vec& bcT);

private:
    int n_ = 0;
    int n_steps_ = 0;
    double dt_ = 0.0;
    double alpha2_ = 0.0;
    double jbar_ = 0.0;
    SchemeOrder scheme_ = SchemeOrder::SecondOrder;
    BlockTridiagonalMatrix matrix_;
    std::vector<Vec> rhs_;
    std::vector<Mat> a_, b_;
    std::vector<Vec> ju_;
    std::vector<Vec> fnode_;
    std::vector<double> jnode_;
    Mat e_first_, e_last_, trailing_;
    Vec bc0_, bcT_;
};

/// Assembles the adjoint shadowing system on the trajectory's grid.
/// jbar is the window average of J (see time_average); it enters the
/// time-dilation source term. Throws ContractViolation for alpha2 <= 0,
/// N < 2, dimension mismatches, or non-finite trajectory data.
LssSystem assemble_adjoint(const Trajectory& traj, const DynamicalSystem& sys,
                           const LssConfig& cfg, double jbar);

/// Replaces the boundary values currently folded into the right-hand side.
/// Only the RHS changes; the interior operator is boundary-independent.
void apply_bc(LssSystem& system, const Vec& bc0, const Vec& bcT);

/// Adjoint solution: psi at all N+1 nodes (boundary values included) and the
/// reconstructed multiplier r (N interval rows; the first-order scheme adds
/// the trailing node value r_N).
struct AdjointSolution {
    std::vector<Vec> psi;
    std::vector<Vec> r;
    double alpha2 = 0.0;
    SchemeOrder scheme = SchemeOrder::SecondOrder;
    double jbar = 0.0;
    /// max-norm residual of the second discrete equation over interior nodes,
    /// relative to the scale of the assembled operator.
    double residual = 0.0;
};

AdjointSolution solve_adjoint(const LssSystem& system);

/// Discrete forward shadowing KKT system: minimize the shadowing norm of
/// (v, eta) subject to the discretized linearized dynamics, with multiplier w
/// pinned to zero at both ends. Shares the eliminated SPD operator with the
/// adjoint assembly; the right-hand side is the node-averaged parameter
/// forcing f_s.
class ForwardKkt {
public:
    const LssSystem& schur() const { return sys_; }
    const std::vector<Vec>& fs_node() const { return fs_; }
    const Vec& fs_row(int k) const { return fs_rows_[k]; }
    double js_row(int k) const { return js_rows_[k]; }

    /// Dense symmetric KKT matrix in (v, eta, w) ordering (small N only).
    Mat dense_kkt() const;

    friend ForwardKkt assemble_forward(const Trajectory&, const DynamicalSystem&,
                                       const LssConfig&, double);

private:
    LssSystem sys_;
    std::vector<Vec> fs_;       // interior node forcing, i = 1..N-1
    std::vector<Vec> fs_rows_;  // f_s at interval rows k = 0..N-1
    std::vector<double> js_rows_;
};

/// jbar enters only the functional quadrature bookkeeping of the returned
/// system (the KKT blocks themselves are jbar-independent).
ForwardKkt assemble_forward(const Trajectory& traj, const DynamicalSystem& sys,
                            const LssConfig& cfg, double jbar);

/// Forward solution: w at all nodes (zero at both ends), v at interval rows,
/// time dilation eta at nodes (eta_i = -w_i^T f_i / alpha2).
struct ForwardSolution {
    std::vector<Vec> w;
    std::vector<Vec> v;
    std::vector<double> eta;
    double alpha2 = 0.0;
    SchemeOrder scheme = SchemeOrder::SecondOrder;
    double jbar = 0.0;
    double residual = 0.0;
};

ForwardSolution solve_forward(const ForwardKkt& kkt);

/// Writes the eliminated operator as text: one line per stored block,
/// "<block row> <block col>" followed by the n*n entries in row-major order.
/// Diagonal and superdiagonal blocks are emitted (the matrix is symmetric).
void write_matrix(const LssSystem& system, std::ostream& out);

}  // namespace lss
