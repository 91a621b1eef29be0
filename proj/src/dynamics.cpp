#include "lsskit/dynamics.hpp"

#include <cmath>

namespace lss {

void DynamicalSystem::require_dim(const Vec& u) const {
    if (u.size() != dim()) {
        throw ContractViolation("state dimension " + std::to_string(u.size()) +
                                " does not match system dimension " + std::to_string(dim()));
    }
}

// ---------------------------------------------------------------------------
// Lorenz 63. The parameter s plays the role of z0; the right-hand side
// depends on z only through z - z0, so shifting (z, z0) together leaves f
// unchanged and the true sensitivity of the z-average is exactly 1.
// ---------------------------------------------------------------------------

Vec Lorenz63::f(const Vec& u, double s) const {
    require_dim(u);
    const double x = u[0], y = u[1], z = u[2];
    Vec out(3);
    out << sigma_ * (y - x), x * (rho_ - (z - s)) - y, x * y - beta_ * (z - s);
    return out;
}

Mat Lorenz63::f_u(const Vec& u, double s) const {
    require_dim(u);
    const double x = u[0], y = u[1], z = u[2];
    Mat out(3, 3);
    out << -sigma_, sigma_, 0.0,
           rho_ - (z - s), -1.0, -x,
           y, x, -beta_;
    return out;
}

Vec Lorenz63::f_s(const Vec& u, double /*s*/) const {
    require_dim(u);
    Vec out(3);
    out << 0.0, u[0], beta_;
    return out;
}

double Lorenz63::J(const Vec& u, double /*s*/) const {
    require_dim(u);
    return u[2];
}

Vec Lorenz63::J_u(const Vec& u, double /*s*/) const {
    require_dim(u);
    Vec out(3);
    out << 0.0, 0.0, 1.0;
    return out;
}

double Lorenz63::J_s(const Vec& u, double /*s*/) const {
    require_dim(u);
    return 0.0;
}

Mat Lorenz63::attractor_box() const {
    Mat box(3, 2);
    box << -20.0, 20.0,
           -25.0, 25.0,
            -5.0, 45.0;
    return box;
}

// ---------------------------------------------------------------------------
// Coupled oscillator. Two limit-cycle oscillators with amplitudes
// a1 = x1^2 + y1^2 and a2 = (x2 - s)^2 + y2^2; the parameter s shifts the
// second oscillator along x2, so the true sensitivity of the x2-average is 1.
// ---------------------------------------------------------------------------

Vec CoupledOscillator::f(const Vec& u, double s) const {
    require_dim(u);
    const double x1 = u[0], y1 = u[1], x2 = u[2], y2 = u[3];
    const double a1 = x1 * x1 + y1 * y1;
    const double a2 = (x2 - s) * (x2 - s) + y2 * y2;
    const double g = 1.0 - a2 + 0.5 * a1 - a1 * a1 / 50.0;
    Vec out(4);
    out << omega0_ * y1 + g * x1 + eps_ * (x2 - s) * y2,
           -omega0_ * x1 + g * y1,
           omega0_ * y2 + (a1 - 1.0) * (x2 - s) + eps_ * x1,
           -omega0_ * (x2 - s) + (a1 - 1.0) * y2;
    return out;
}

Mat CoupledOscillator::f_u(const Vec& u, double s) const {
    require_dim(u);
    const double x1 = u[0], y1 = u[1], x2 = u[2], y2 = u[3];
    const double a1 = x1 * x1 + y1 * y1;
    const double a2 = (x2 - s) * (x2 - s) + y2 * y2;
    const double g = 1.0 - a2 + 0.5 * a1 - a1 * a1 / 50.0;
    const double c = 1.0 - 2.0 * a1 / 25.0;  // d g / d a1 times 2
    Mat out(4, 4);
    out(0, 0) = g + x1 * x1 * c;
    out(0, 1) = omega0_ + x1 * y1 * c;
    out(0, 2) = -2.0 * (x2 - s) * x1 + eps_ * y2;
    out(0, 3) = -2.0 * y2 * x1 + eps_ * (x2 - s);
    out(1, 0) = -omega0_ + y1 * x1 * c;
    out(1, 1) = g + y1 * y1 * c;
    out(1, 2) = -2.0 * (x2 - s) * y1;
    out(1, 3) = -2.0 * y2 * y1;
    out(2, 0) = 2.0 * x1 * (x2 - s) + eps_;
    out(2, 1) = 2.0 * y1 * (x2 - s);
    out(2, 2) = a1 - 1.0;
    out(2, 3) = omega0_;
    out(3, 0) = 2.0 * x1 * y2;
    out(3, 1) = 2.0 * y1 * y2;
    out(3, 2) = -omega0_;
    out(3, 3) = a1 - 1.0;
    return out;
}

Vec CoupledOscillator::f_s(const Vec& u, double s) const {
    require_dim(u);
    const double x1 = u[0], y1 = u[1], x2 = u[2], y2 = u[3];
    const double a1 = x1 * x1 + y1 * y1;
    Vec out(4);
    out << 2.0 * x1 * (x2 - s) - eps_ * y2,
           2.0 * y1 * (x2 - s),
           1.0 - a1,
           omega0_;
    return out;
}

double CoupledOscillator::J(const Vec& u, double /*s*/) const {
    require_dim(u);
    return u[2];
}

Vec CoupledOscillator::J_u(const Vec& u, double /*s*/) const {
    require_dim(u);
    Vec out(4);
    out << 0.0, 0.0, 1.0, 0.0;
    return out;
}

double CoupledOscillator::J_s(const Vec& u, double /*s*/) const {
    require_dim(u);
    return 0.0;
}

Mat CoupledOscillator::attractor_box() const {
    Mat box(4, 2);
    box << -2.0, 2.0,
           -2.0, 2.0,
           -2.0, 2.0,
           -2.0, 2.0;
    return box;
}

std::unique_ptr<DynamicalSystem> make_system(const std::string& name) {
    if (name == "lorenz63") return std::make_unique<Lorenz63>();
    if (name == "oscillator") return std::make_unique<CoupledOscillator>();
    throw ContractViolation("unknown system '" + name + "' (expected lorenz63 or oscillator)");
}

Vec random_state(const DynamicalSystem& sys, SplitMix64& rng) {
    const Mat box = sys.attractor_box();
    Vec u(sys.dim());
    for (int i = 0; i < sys.dim(); ++i) u[i] = rng.uniform(box(i, 0), box(i, 1));
    return u;
}

namespace {
double fd_step(double h, double v) { return h * std::max(1.0, std::abs(v)); }
}  // namespace

Mat fd_f_u(const DynamicalSystem& sys, const Vec& u, double s, double h) {
    Mat out(sys.dim(), sys.dim());
    for (int j = 0; j < sys.dim(); ++j) {
        const double hj = fd_step(h, u[j]);
        Vec up = u, um = u;
        up[j] += hj;
        um[j] -= hj;
        out.col(j) = (sys.f(up, s) - sys.f(um, s)) / (2.0 * hj);
    }
    return out;
}

Vec fd_f_s(const DynamicalSystem& sys, const Vec& u, double s, double h) {
    const double hs = fd_step(h, s);
    return (sys.f(u, s + hs) - sys.f(u, s - hs)) / (2.0 * hs);
}

Vec fd_J_u(const DynamicalSystem& sys, const Vec& u, double s, double h) {
    Vec out(sys.dim());
    for (int j = 0; j < sys.dim(); ++j) {
        const double hj = fd_step(h, u[j]);
        Vec up = u, um = u;
        up[j] += hj;
        um[j] -= hj;
        out[j] = (sys.J(up, s) - sys.J(um, s)) / (2.0 * hj);
    }
    return out;
}

double fd_J_s(const DynamicalSystem& sys, const Vec& u, double s, double h) {
    const double hs = fd_step(h, s);
    return (sys.J(u, s + hs) - sys.J(u, s - hs)) / (2.0 * hs);
}

}  // namespace lss
