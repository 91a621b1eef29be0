#pragma once

#include <vector>

#include "lsskit/types.hpp"

namespace lss {

/// Symmetric block-tridiagonal matrix with m square blocks of size n.
/// Only the diagonal and superdiagonal blocks are stored; the subdiagonal is
/// their transpose.
class BlockTridiagonalMatrix {
public:
    BlockTridiagonalMatrix() = default;
    BlockTridiagonalMatrix(std::vector<Mat> diag, std::vector<Mat> super);

    int block_dim() const { return n_; }
    int num_blocks() const { return static_cast<int>(diag_.size()); }
    int size() const { return n_ * num_blocks(); }

    const Mat& diag(int i) const { return diag_[i]; }
    const Mat& super(int i) const { return super_[i]; }  // block (i, i+1)

    std::vector<Vec> multiply(const std::vector<Vec>& x) const;

    /// Densified copy (small systems / diagnostics).
    Mat dense() const;

    /// max |M_ij| over stored blocks.
    double max_abs() const;
    /// max deviation |M - M^T| over the diagonal blocks (off-diagonal symmetry
    /// is structural).
    double symmetry_error() const;

private:
    int n_ = 0;
    std::vector<Mat> diag_;
    std::vector<Mat> super_;
};

/// Block Cholesky factorization M = L L^T with block-bidiagonal L.
/// Factor once, solve many right-hand sides.
class BlockCholesky {
public:
    explicit BlockCholesky(const BlockTridiagonalMatrix& m);

    std::vector<Vec> solve(const std::vector<Vec>& rhs) const;

private:
    int n_ = 0;
    std::vector<Mat> diag_chol_;  // lower-triangular Cholesky factor of each pivot
    std::vector<Mat> sub_;        // L block (i+1, i)
};

/// Direct SPD solve via block Cholesky. Throws NotPositiveDefinite on a
/// non-positive pivot.
std::vector<Vec> cholesky_solve(const BlockTridiagonalMatrix& m, const std::vector<Vec>& rhs);

struct CgResult {
    std::vector<Vec> x;
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Conjugate gradients with an optional block-Jacobi preconditioner.
/// Stops at ||b - Mx|| <= tol * ||b||; throws ConvergenceFailure past max_iter.
CgResult cg_solve(const BlockTridiagonalMatrix& m, const std::vector<Vec>& rhs, double tol,
                  int max_iter, bool block_jacobi = true);

struct EigenEstimate {
    double lambda = 0.0;
    int iterations = 0;
    /// ||M x - lambda x|| / (||M||_inf ||x||) at return.
    double residual = 0.0;
};

/// Smallest eigenvalue of an SPD matrix by inverse power iteration on the
/// block Cholesky factorization, with Rayleigh-quotient estimates and an
/// Aitken-style stopping rule targeting a relative eigenvalue error of tol.
EigenEstimate min_eigenvalue(const BlockTridiagonalMatrix& m, double tol = 1e-8,
                             int max_iter = 10000);

/// Largest eigenvalue by plain power iteration.
EigenEstimate max_eigenvalue(const BlockTridiagonalMatrix& m, double tol = 1e-8,
                             int max_iter = 10000);

double dot(const std::vector<Vec>& a, const std::vector<Vec>& b);
double norm(const std::vector<Vec>& a);

}  // namespace lss
