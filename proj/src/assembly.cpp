#include "lsskit/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace lss {

int order_of(SchemeOrder scheme) { return scheme == SchemeOrder::FirstOrder ? 1 : 2; }

LssConfig LssConfig::constant_bc(double alpha2, SchemeOrder scheme, double c, int n) {
    LssConfig cfg;
    cfg.alpha2 = alpha2;
    cfg.scheme = scheme;
    cfg.bc0 = Vec::Constant(n, c);
    cfg.bcT = Vec::Constant(n, c);
    return cfg;
}

namespace {

Vec bc_or_zero(const Vec& bc, int n) {
    if (bc.size() == 0) return Vec::Zero(n);
    if (bc.size() != n) throw ContractViolation("boundary vector has wrong dimension");
    if (!bc.allFinite()) throw ContractViolation("boundary vector is not finite");
    return bc;
}

}  // namespace

LssSystem assemble_adjoint(const Trajectory& traj, const DynamicalSystem& sys,
                           const LssConfig& cfg, double jbar) {
    const int n = sys.dim();
    const int n_steps = traj.n_steps();
    const double dt = traj.dt();
    const double s = traj.parameter();
    if (cfg.alpha2 <= 0.0) throw ContractViolation("alpha2 must be positive");
    if (n_steps < 2) throw ContractViolation("need at least 2 time steps");
    if (traj.dim() != n) throw ContractViolation("trajectory/system dimension mismatch");
    if (!std::isfinite(jbar)) throw ContractViolation("jbar is not finite");
    for (const Vec& u : traj.storage()) {
        if (!u.allFinite()) throw ContractViolation("trajectory contains non-finite states");
    }

    LssSystem out;
    out.n_ = n;
    out.n_steps_ = n_steps;
    out.dt_ = dt;
    out.alpha2_ = cfg.alpha2;
    out.jbar_ = jbar;
    out.scheme_ = cfg.scheme;

    const Mat identity_over_dt = Mat::Identity(n, n) / dt;
    const bool second = cfg.scheme == SchemeOrder::SecondOrder;

    // Interval rows: the first discrete equation expresses the multiplier row
    // as r_k = A_k psi_k + B_k psi_{k+1} + j_u[k].
    out.a_.resize(n_steps);
    out.b_.resize(n_steps);
    out.ju_.resize(n_steps);
    for (int k = 0; k < n_steps; ++k) {
        if (second) {
            const Vec& um = traj.midpoint(k);
            const Mat fut = sys.f_u(um, s).transpose();
            out.a_[k] = -identity_over_dt + 0.5 * fut;
            out.b_[k] = identity_over_dt + 0.5 * fut;
            out.ju_[k] = sys.J_u(um, s);
        } else {
            const Vec un = traj.node_state(k);
            out.a_[k] = -identity_over_dt + sys.f_u(un, s).transpose();
            out.b_[k] = identity_over_dt;
            out.ju_[k] = sys.J_u(un, s);
        }
    }

    // Node data for the second discrete equation (time-dilation row).
    const int node_top = second ? n_steps - 1 : n_steps;
    out.fnode_.assign(n_steps + 1, Vec());
    out.jnode_.assign(n_steps + 1, 0.0);
    for (int i = 1; i <= node_top; ++i) {
        out.fnode_[i] = traj.node_velocity(i);
        out.jnode_[i] = second
                            ? 0.5 * (sys.J(traj.midpoint(i), s) + sys.J(traj.midpoint(i - 1), s))
                            : sys.J(traj.node_state(i), s);
    }
    if (!second) {
        out.trailing_ = identity_over_dt - sys.f_u(traj.node_state(n_steps), s);
    }

    // Eliminated SPD operator on interior nodes 1..N-1.
    std::vector<Mat> diag(n_steps - 1);
    std::vector<Mat> super(n_steps > 2 ? n_steps - 2 : 0);
    out.rhs_.resize(n_steps - 1);
    for (int i = 1; i <= n_steps - 1; ++i) {
        const Vec& fi = out.fnode_[i];
        diag[i - 1] = out.a_[i].transpose() * out.a_[i] +
                      out.b_[i - 1].transpose() * out.b_[i - 1] +
                      (fi * fi.transpose()) / cfg.alpha2;
        out.rhs_[i - 1] = -((out.jnode_[i] - jbar) / cfg.alpha2) * fi -
                          out.a_[i].transpose() * out.ju_[i] -
                          out.b_[i - 1].transpose() * out.ju_[i - 1];
        if (i <= n_steps - 2) super[i - 1] = out.a_[i].transpose() * out.b_[i];
    }
    out.matrix_ = BlockTridiagonalMatrix(std::move(diag), std::move(super));
    out.e_first_ = out.a_[0].transpose() * out.b_[0];
    out.e_last_ = out.a_[n_steps - 1].transpose() * out.b_[n_steps - 1];
    out.bc0_ = Vec::Zero(n);
    out.bcT_ = Vec::Zero(n);

    apply_bc(out, bc_or_zero(cfg.bc0, n), bc_or_zero(cfg.bcT, n));
    return out;
}

void apply_bc(LssSystem& system, const Vec& bc0, const Vec& bcT) {
    const int n = system.block_dim();
    const Vec new0 = bc_or_zero(bc0, n);
    const Vec newT = bc_or_zero(bcT, n);
    // Boundary data couples into the first and last interior rows only; swap
    // out the previously applied contribution.
    system.rhs_.front() -= system.e_first_.transpose() * (new0 - system.bc0_);
    system.rhs_.back() -= system.e_last_ * (newT - system.bcT_);
    system.bc0_ = new0;
    system.bcT_ = newT;
}

namespace {

// Residual of the time-dilation equation at interior nodes, relative to the
// operator scale. The multiplier equation is satisfied identically by
// construction of r.
double adjoint_residual(const LssSystem& sys, const std::vector<Vec>& psi,
                        const std::vector<Vec>& r) {
    const int n_steps = sys.n_steps();
    double worst = 0.0;
    double psi_scale = 1.0;
    for (const Vec& p : psi) psi_scale = std::max(psi_scale, p.lpNorm<Eigen::Infinity>());
    for (int i = 1; i <= n_steps - 1; ++i) {
        const Vec& fi = sys.f_node(i);
        const Vec res = -sys.a_block(i).transpose() * r[i] -
                        sys.b_block(i - 1).transpose() * r[i - 1] -
                        ((psi[i].dot(fi) + sys.j_node(i) - sys.jbar()) / sys.alpha2()) * fi;
        worst = std::max(worst, res.lpNorm<Eigen::Infinity>());
    }
    return worst / (sys.matrix().max_abs() * psi_scale);
}

}  // namespace

AdjointSolution solve_adjoint(const LssSystem& system) {
    const int n_steps = system.n_steps();
    const std::vector<Vec> interior = cholesky_solve(system.matrix(), system.rhs());

    AdjointSolution sol;
    sol.alpha2 = system.alpha2();
    sol.scheme = system.scheme();
    sol.jbar = system.jbar();
    sol.psi.reserve(n_steps + 1);
    sol.psi.push_back(system.bc0());
    for (const Vec& p : interior) sol.psi.push_back(p);
    sol.psi.push_back(system.bcT());

    sol.r.resize(n_steps);
    for (int k = 0; k < n_steps; ++k) {
        sol.r[k] = system.a_block(k) * sol.psi[k] + system.b_block(k) * sol.psi[k + 1] +
                   system.j_u_row(k);
    }
    if (system.scheme() == SchemeOrder::FirstOrder) {
        // Trailing multiplier from the final time-dilation row:
        // (I/dt - F_N) r_N = r_{N-1}/dt + ((psi_N . f_N) + j_N - jbar) f_N / alpha2.
        const Vec& fN = system.f_node(n_steps);
        const Vec rhs = sol.r[n_steps - 1] / system.dt() +
                        ((system.bcT().dot(fN) + system.j_node(n_steps) - system.jbar()) /
                         system.alpha2()) *
                            fN;
        sol.r.push_back(system.trailing_matrix().partialPivLu().solve(rhs));
    }
    sol.residual = adjoint_residual(system, sol.psi, sol.r);
    return sol;
}

ForwardKkt assemble_forward(const Trajectory& traj, const DynamicalSystem& sys,
                            const LssConfig& cfg, double jbar) {
    // The forward multiplier is pinned to zero at both ends regardless of
    // cfg boundary data (those belong to the adjoint problem).
    LssConfig hom = cfg;
    hom.bc0 = Vec();
    hom.bcT = Vec();

    ForwardKkt kkt;
    kkt.sys_ = assemble_adjoint(traj, sys, hom, jbar);

    const int n_steps = traj.n_steps();
    const double s = traj.parameter();
    kkt.fs_rows_.resize(n_steps);
    kkt.js_rows_.resize(n_steps);
    for (int k = 0; k < n_steps; ++k) {
        kkt.fs_rows_[k] = sys.f_s(traj.midpoint(k), s);
        kkt.js_rows_[k] = sys.J_s(traj.midpoint(k), s);
    }
    kkt.fs_.resize(n_steps - 1);
    for (int i = 1; i <= n_steps - 1; ++i) {
        kkt.fs_[i - 1] = 0.5 * (kkt.fs_rows_[i - 1] + kkt.fs_rows_[i]);
    }
    // Replace the adjoint right-hand side with the parameter forcing.
    kkt.sys_.rhs_ = kkt.fs_;
    return kkt;
}

Mat ForwardKkt::dense_kkt() const {
    const int n = sys_.block_dim();
    const int n_steps = sys_.n_steps();
    const int nv = n_steps * n;        // v at interval rows
    const int ne = n_steps - 1;        // eta at interior nodes
    const int nw = (n_steps - 1) * n;  // w at interior nodes
    const int total = nv + ne + nw;
    Mat kkt = Mat::Zero(total, total);

    kkt.block(0, 0, nv, nv).setIdentity();
    for (int i = 0; i < ne; ++i) kkt(nv + i, nv + i) = sys_.alpha2();

    // Constraint rows G v + eta f = -f_s and their transposes.
    for (int i = 1; i <= n_steps - 1; ++i) {
        const int row = nv + ne + (i - 1) * n;
        const Mat at = sys_.a_block(i).transpose();
        const Mat bt = sys_.b_block(i - 1).transpose();
        kkt.block(row, i * n, n, n) = at;
        kkt.block(i * n, row, n, n) = at.transpose();
        kkt.block(row, (i - 1) * n, n, n) = bt;
        kkt.block((i - 1) * n, row, n, n) = bt.transpose();
        const Vec& fi = sys_.f_node(i);
        kkt.block(row, nv + (i - 1), n, 1) = fi;
        kkt.block(nv + (i - 1), row, 1, n) = fi.transpose();
    }
    return kkt;
}

ForwardSolution solve_forward(const ForwardKkt& kkt) {
    const LssSystem& sys = kkt.schur();
    const int n_steps = sys.n_steps();
    const int n = sys.block_dim();
    const std::vector<Vec> interior = cholesky_solve(sys.matrix(), sys.rhs());

    ForwardSolution sol;
    sol.alpha2 = sys.alpha2();
    sol.scheme = sys.scheme();
    sol.jbar = sys.jbar();
    sol.w.reserve(n_steps + 1);
    sol.w.push_back(Vec::Zero(n));
    for (const Vec& wi : interior) sol.w.push_back(wi);
    sol.w.push_back(Vec::Zero(n));

    sol.v.resize(n_steps);
    for (int k = 0; k < n_steps; ++k) {
        sol.v[k] = -(sys.a_block(k) * sol.w[k] + sys.b_block(k) * sol.w[k + 1]);
    }
    sol.eta.assign(n_steps + 1, 0.0);
    for (int i = 1; i <= n_steps - 1; ++i) {
        sol.eta[i] = -sol.w[i].dot(sys.f_node(i)) / sys.alpha2();
    }

    // Residual of the discretized linearized dynamics at interior nodes.
    double worst = 0.0, scale = 1.0;
    for (const Vec& vi : sol.v) scale = std::max(scale, vi.lpNorm<Eigen::Infinity>());
    for (int i = 1; i <= n_steps - 1; ++i) {
        const Vec res = sys.a_block(i).transpose() * sol.v[i] +
                        sys.b_block(i - 1).transpose() * sol.v[i - 1] +
                        sol.eta[i] * sys.f_node(i) + kkt.fs_node()[i - 1];
        worst = std::max(worst, res.lpNorm<Eigen::Infinity>());
    }
    sol.residual = worst / (sys.matrix().max_abs() * scale);
    return sol;
}

void write_matrix(const LssSystem& system, std::ostream& out) {
    const BlockTridiagonalMatrix& m = system.matrix();
    const int n = m.block_dim();
    char buf[40];
    auto emit = [&](int bi, int bj, const Mat& block) {
        out << bi << " " << bj;
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                std::snprintf(buf, sizeof(buf), "%.17g", block(r, c));
                out << " " << buf;
            }
        }
        out << "\n";
    };
    out << "# block row, block col, row-major entries; symmetric, block size " << n << ", "
        << m.num_blocks() << " interior nodes\n";
    for (int i = 0; i < m.num_blocks(); ++i) {
        emit(i, i, m.diag(i));
        if (i + 1 < m.num_blocks()) emit(i, i + 1, m.super(i));
    }
}

}  // namespace lss
