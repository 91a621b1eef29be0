#pragma once

#include <memory>
#include <string>

#include "lsskit/rng.hpp"
#include "lsskit/types.hpp"

namespace lss {

/// Autonomous ODE du/dt = f(u, s) with one scalar design parameter s and a
/// scalar output J(u, s).
///
/// Implementations supply analytic derivatives of f and J with respect to the
/// state and the parameter. All hooks are pure functions of (u, s): instances
/// carry no mutable state and are shareable across threads.
class DynamicalSystem {
public:
    virtual ~DynamicalSystem() = default;

    virtual int dim() const = 0;
    virtual std::string name() const = 0;

    /// Baseline value of the design parameter.
    virtual double param() const = 0;

    virtual Vec f(const Vec& u, double s) const = 0;
    /// Jacobian, entry (i,j) = d f_i / d u_j.
    virtual Mat f_u(const Vec& u, double s) const = 0;
    virtual Vec f_s(const Vec& u, double s) const = 0;
    virtual double J(const Vec& u, double s) const = 0;
    virtual Vec J_u(const Vec& u, double s) const = 0;
    virtual double J_s(const Vec& u, double s) const = 0;

    /// Axis-aligned box enclosing the attractor, one (lo, hi) row per
    /// coordinate. Random initial states are drawn from it.
    virtual Mat attractor_box() const = 0;

    /// Spin-up time that reliably lands a box sample on the attractor.
    virtual double default_spin_up() const = 0;

protected:
    void require_dim(const Vec& u) const;
};

/// Lorenz 63 convection model with the attractor-translation parameter z0.
/// J(u) = z, so dJbar/dz0 = 1 exactly.
class Lorenz63 final : public DynamicalSystem {
public:
    explicit Lorenz63(double z0 = 0.0, double sigma = 10.0, double beta = 8.0 / 3.0,
                      double rho = 25.0)
        : z0_(z0), sigma_(sigma), beta_(beta), rho_(rho) {}

    int dim() const override { return 3; }
    std::string name() const override { return "lorenz63"; }
    double param() const override { return z0_; }

    Vec f(const Vec& u, double s) const override;
    Mat f_u(const Vec& u, double s) const override;
    Vec f_s(const Vec& u, double s) const override;
    double J(const Vec& u, double s) const override;
    Vec J_u(const Vec& u, double s) const override;
    double J_s(const Vec& u, double s) const override;

    Mat attractor_box() const override;
    double default_spin_up() const override { return 50.0; }

    double sigma() const { return sigma_; }
    double beta() const { return beta_; }
    double rho() const { return rho_; }

private:
    double z0_, sigma_, beta_, rho_;
};

/// Two coupled limit-cycle oscillators (hyperbolic chaotic flow); the
/// parameter s shifts the second oscillator along x2. J(u) = x2, so
/// dJbar/ds = 1 exactly.
class CoupledOscillator final : public DynamicalSystem {
public:
    explicit CoupledOscillator(double s = 0.0, double omega0 = 2.0 * EIGEN_PI,
                               double eps = 0.3)
        : s_(s), omega0_(omega0), eps_(eps) {}

    int dim() const override { return 4; }
    std::string name() const override { return "oscillator"; }
    double param() const override { return s_; }

    Vec f(const Vec& u, double s) const override;
    Mat f_u(const Vec& u, double s) const override;
    Vec f_s(const Vec& u, double s) const override;
    double J(const Vec& u, double s) const override;
    Vec J_u(const Vec& u, double s) const override;
    double J_s(const Vec& u, double s) const override;

    Mat attractor_box() const override;
    double default_spin_up() const override { return 100.0; }

    double omega0() const { return omega0_; }
    double eps() const { return eps_; }

private:
    double s_, omega0_, eps_;
};

/// Built-in systems by name ("lorenz63", "oscillator").
std::unique_ptr<DynamicalSystem> make_system(const std::string& name);

/// Uniform sample from the system's attractor box.
Vec random_state(const DynamicalSystem& sys, SplitMix64& rng);

// Central finite-difference fallbacks, step h scaled per component by
// max(1, |u_j|). Meant for prototyping user systems and as a test oracle for
// the analytic derivatives.
Mat fd_f_u(const DynamicalSystem& sys, const Vec& u, double s, double h = 1e-5);
Vec fd_f_s(const DynamicalSystem& sys, const Vec& u, double s, double h = 1e-5);
Vec fd_J_u(const DynamicalSystem& sys, const Vec& u, double s, double h = 1e-5);
double fd_J_s(const DynamicalSystem& sys, const Vec& u, double s, double h = 1e-5);

}  // namespace lss
