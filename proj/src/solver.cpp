#include "lsskit/solver.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace lss {

BlockTridiagonalMatrix::BlockTridiagonalMatrix(std::vector<Mat> diag, std::vector<Mat> super)
    : diag_(std::move(diag)), super_(std::move(super)) {
    if (diag_.empty()) throw ContractViolation("block-tridiagonal matrix needs >= 1 block");
    if (super_.size() + 1 != diag_.size()) {
        throw ContractViolation("expected one fewer superdiagonal block than diagonal blocks");
    }
    n_ = static_cast<int>(diag_.front().rows());
    for (const Mat& d : diag_) {
        if (d.rows() != n_ || d.cols() != n_ || !d.allFinite()) {
            throw ContractViolation("diagonal blocks must be square n x n and finite");
        }
    }
    for (const Mat& e : super_) {
        if (e.rows() != n_ || e.cols() != n_ || !e.allFinite()) {
            throw ContractViolation("superdiagonal blocks must be square n x n and finite");
        }
    }
}

std::vector<Vec> BlockTridiagonalMatrix::multiply(const std::vector<Vec>& x) const {
    const int m = num_blocks();
    if (static_cast<int>(x.size()) != m) throw ContractViolation("block count mismatch");
    std::vector<Vec> y(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        y[i] = diag_[i] * x[i];
        if (i > 0) y[i] += super_[i - 1].transpose() * x[i - 1];
        if (i + 1 < m) y[i] += super_[i] * x[i + 1];
    }
    return y;
}

Mat BlockTridiagonalMatrix::dense() const {
    const int m = num_blocks();
    Mat full = Mat::Zero(m * n_, m * n_);
    for (int i = 0; i < m; ++i) {
        full.block(i * n_, i * n_, n_, n_) = diag_[i];
        if (i + 1 < m) {
            full.block(i * n_, (i + 1) * n_, n_, n_) = super_[i];
            full.block((i + 1) * n_, i * n_, n_, n_) = super_[i].transpose();
        }
    }
    return full;
}

double BlockTridiagonalMatrix::max_abs() const {
    double v = 0.0;
    for (const Mat& d : diag_) v = std::max(v, d.cwiseAbs().maxCoeff());
    for (const Mat& e : super_) v = std::max(v, e.cwiseAbs().maxCoeff());
    return v;
}

double BlockTridiagonalMatrix::symmetry_error() const {
    double v = 0.0;
    for (const Mat& d : diag_) v = std::max(v, (d - d.transpose()).cwiseAbs().maxCoeff());
    return v;
}

BlockCholesky::BlockCholesky(const BlockTridiagonalMatrix& m) : n_(m.block_dim()) {
    const int blocks = m.num_blocks();
    diag_chol_.reserve(static_cast<std::size_t>(blocks));
    sub_.reserve(static_cast<std::size_t>(blocks - 1));
    Mat pivot = m.diag(0);
    for (int i = 0; i < blocks; ++i) {
        Eigen::LLT<Mat> llt(pivot);
        if (llt.info() != Eigen::Success) {
            throw NotPositiveDefinite("not positive definite: pivot block " + std::to_string(i));
        }
        const Mat li = llt.matrixL();
        diag_chol_.push_back(li);
        if (i + 1 < blocks) {
            // L block below the pivot: E_i^T L_i^{-T}.
            const Mat x = li.triangularView<Eigen::Lower>().solve(m.super(i));
            sub_.push_back(x.transpose());
            pivot = m.diag(i + 1) - sub_.back() * sub_.back().transpose();
        }
    }
}

std::vector<Vec> BlockCholesky::solve(const std::vector<Vec>& rhs) const {
    const int m = static_cast<int>(diag_chol_.size());
    if (static_cast<int>(rhs.size()) != m) throw ContractViolation("rhs block count mismatch");
    std::vector<Vec> y(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Vec t = rhs[i];
        if (i > 0) t -= sub_[i - 1] * y[i - 1];
        y[i] = diag_chol_[i].triangularView<Eigen::Lower>().solve(t);
    }
    std::vector<Vec> x(static_cast<std::size_t>(m));
    for (int i = m - 1; i >= 0; --i) {
        Vec t = y[i];
        if (i + 1 < m) t -= sub_[i].transpose() * x[i + 1];
        x[i] = diag_chol_[i].transpose().triangularView<Eigen::Upper>().solve(t);
    }
    return x;
}

std::vector<Vec> cholesky_solve(const BlockTridiagonalMatrix& m, const std::vector<Vec>& rhs) {
    return BlockCholesky(m).solve(rhs);
}

double dot(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) out += a[i].dot(b[i]);
    return out;
}

double norm(const std::vector<Vec>& a) { return std::sqrt(dot(a, a)); }

CgResult cg_solve(const BlockTridiagonalMatrix& m, const std::vector<Vec>& rhs, double tol,
                  int max_iter, bool block_jacobi) {
    const int blocks = m.num_blocks();
    if (static_cast<int>(rhs.size()) != blocks) throw ContractViolation("rhs block count mismatch");

    std::vector<Eigen::LLT<Mat>> precond;
    if (block_jacobi) {
        precond.reserve(static_cast<std::size_t>(blocks));
        for (int i = 0; i < blocks; ++i) {
            precond.emplace_back(m.diag(i));
            if (precond.back().info() != Eigen::Success) {
                throw NotPositiveDefinite("not positive definite: diagonal block " +
                                          std::to_string(i));
            }
        }
    }
    auto apply_precond = [&](const std::vector<Vec>& r) {
        std::vector<Vec> z(r.size());
        for (int i = 0; i < blocks; ++i) z[i] = block_jacobi ? precond[i].solve(r[i]) : r[i];
        return z;
    };

    CgResult out;
    out.x.assign(static_cast<std::size_t>(blocks), Vec::Zero(m.block_dim()));
    const double rhs_norm = norm(rhs);
    if (rhs_norm == 0.0) return out;  // zero rhs, zero solution, zero iterations

    std::vector<Vec> r = rhs;
    std::vector<Vec> z = apply_precond(r);
    std::vector<Vec> p = z;
    double rz = dot(r, z);
    for (int it = 1; it <= max_iter; ++it) {
        const std::vector<Vec> mp = m.multiply(p);
        const double alpha = rz / dot(p, mp);
        for (int i = 0; i < blocks; ++i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        const double rn = norm(r);
        out.iterations = it;
        out.relative_residual = rn / rhs_norm;
        if (out.relative_residual <= tol) return out;
        z = apply_precond(r);
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < blocks; ++i) p[i] = z[i] + beta * p[i];
    }
    throw ConvergenceFailure("cg did not reach tol " + std::to_string(tol) + " within " +
                             std::to_string(max_iter) + " iterations (residual " +
                             std::to_string(out.relative_residual) + ")");
}

namespace {

std::vector<Vec> seed_vector(int blocks, int n) {
    // Fixed deterministic start vector.
    std::vector<Vec> x(static_cast<std::size_t>(blocks));
    std::uint64_t state = 0x243f6a8885a308d3ULL;
    for (auto& xi : x) {
        xi = Vec(n);
        for (int j = 0; j < n; ++j) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            xi[j] = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
        }
    }
    return x;
}

void normalize(std::vector<Vec>& x) {
    const double nx = norm(x);
    for (auto& xi : x) xi /= nx;
}

double eigen_residual(const BlockTridiagonalMatrix& m, const std::vector<Vec>& x, double lambda) {
    std::vector<Vec> mx = m.multiply(x);
    for (std::size_t i = 0; i < x.size(); ++i) mx[i] -= lambda * x[i];
    return norm(mx) / (m.max_abs() * static_cast<double>(m.block_dim()) * 3.0);
}

// Aitken-style stop: with linear eigenvalue convergence at observed ratio
// rho, the remaining error is about change * rho / (1 - rho).
bool converged(double change, double prev_change, double lambda, double tol) {
    if (change <= 1e-3 * tol * std::abs(lambda)) return true;
    if (prev_change <= 0.0) return false;
    double rho = change / prev_change;
    if (rho >= 0.999) return false;
    return change * rho / (1.0 - rho) <= tol * std::abs(lambda);
}

}  // namespace

EigenEstimate min_eigenvalue(const BlockTridiagonalMatrix& m, double tol, int max_iter) {
    const BlockCholesky chol(m);
    std::vector<Vec> x = seed_vector(m.num_blocks(), m.block_dim());
    normalize(x);
    const double resid_target = std::max(100.0 * tol, 1e-12);
    double lambda = 0.0, prev_change = -1.0;
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<Vec> y = chol.solve(x);
        // Rayleigh quotient at y: (y^T M y)/(y^T y) = (y^T x)/(y^T y).
        const double lambda_new = dot(y, x) / dot(y, y);
        normalize(y);
        x = std::move(y);
        const double change = std::abs(lambda_new - lambda);
        if (it > 1 && converged(change, prev_change, lambda_new, tol)) {
            const double resid = eigen_residual(m, x, lambda_new);
            if (resid <= resid_target) return EigenEstimate{lambda_new, it, resid};
        }
        prev_change = change;
        lambda = lambda_new;
    }
    throw ConvergenceFailure("inverse power iteration did not converge in " +
                             std::to_string(max_iter) + " iterations");
}

EigenEstimate max_eigenvalue(const BlockTridiagonalMatrix& m, double tol, int max_iter) {
    std::vector<Vec> x = seed_vector(m.num_blocks(), m.block_dim());
    normalize(x);
    const double resid_target = std::max(100.0 * tol, 1e-12);
    double lambda = 0.0, prev_change = -1.0;
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<Vec> y = m.multiply(x);
        const double lambda_new = dot(x, y);
        normalize(y);
        x = std::move(y);
        const double change = std::abs(lambda_new - lambda);
        if (it > 1 && converged(change, prev_change, lambda_new, tol)) {
            const double resid = eigen_residual(m, x, lambda_new);
            if (resid <= resid_target) return EigenEstimate{lambda_new, it, resid};
        }
        prev_change = change;
        lambda = lambda_new;
    }
    throw ConvergenceFailure("power iteration did not converge in " + std::to_string(max_iter) +
                             " iterations");
}

}  // namespace lss
