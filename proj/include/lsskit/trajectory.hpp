#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsskit/dynamics.hpp"
#include "lsskit/types.hpp"

namespace lss {

/// Uniform grid over the window [0, T]; node times t_i = i*dt for i = 0..N,
/// midpoint times t_{i+1/2} = (i + 1/2)*dt.
struct TimeGrid {
    double dt = 0.0;
    int n_steps = 0;  // N >= 2

    double horizon() const { return dt * n_steps; }
};

/// Primal states stored at interval midpoints.
///
/// Midpoint index j refers to the state at time (j + 1/2)*dt; stored range is
/// j in [-1-margin, N+margin]. The pre-window midpoint u_{-1/2} and trailing
/// midpoint u_{N+1/2} make the node velocity (u_{i+1/2} - u_{i-1/2})/dt
/// available at every node i = 0..N; a positive margin keeps enough
/// surrounding data to restrict onto coarser staggered grids.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(TimeGrid grid, int margin, std::vector<Vec> midpoints,
               std::string system_name, double s, std::uint64_t seed);

    const TimeGrid& grid() const { return grid_; }
    int n_steps() const { return grid_.n_steps; }
    double dt() const { return grid_.dt; }
    int margin() const { return margin_; }
    int dim() const { return mids_.empty() ? 0 : static_cast<int>(mids_.front().size()); }
    const std::string& system_name() const { return system_; }
    double parameter() const { return s_; }
    std::uint64_t seed() const { return seed_; }

    /// State u_{j+1/2}; valid for j in [-1-margin, N+margin].
    const Vec& midpoint(int j) const;

    /// Second-order node state (u_{i-1/2} + u_{i+1/2})/2.
    Vec node_state(int i) const;

    /// Node velocity f_i = (u_{i+1/2} - u_{i-1/2})/dt.
    Vec node_velocity(int i) const;

    int min_midpoint_index() const { return -1 - margin_; }
    int max_midpoint_index() const { return grid_.n_steps + margin_; }

    const std::vector<Vec>& storage() const { return mids_; }

private:
    void require_midpoint(int j) const;

    TimeGrid grid_{};
    int margin_ = 0;
    std::vector<Vec> mids_;
    std::string system_;
    double s_ = 0.0;
    std::uint64_t seed_ = 0;
};

/// Integrates du/dt = f(u, s) with the classical 4th-order one-step method at
/// a fixed substep h <= dt/2, discards spin_up time units, then fills the
/// staggered grid. The first stored midpoint is the spun-up state advanced by
/// dt/2. Throws BlowUpError if |u|_inf exceeds 1e8.
///
/// rng_seed is metadata only (the seed that produced u0); the integration
/// itself is deterministic in (u0, grid, spin_up).
Trajectory integrate(const DynamicalSystem& sys, const Vec& u0, const TimeGrid& grid,
                     double spin_up, std::uint64_t rng_seed, int margin = 0);

/// One classical RK4 step of size h.
Vec rk4_step(const DynamicalSystem& sys, const Vec& u, double s, double h);

/// n_sub equal RK4 steps covering t_len time units.
Vec advance(const DynamicalSystem& sys, Vec u, double s, double t_len, int n_sub);

/// Restricts to a grid coarsened by an integer factor (which must divide N).
/// Coarse midpoint states are linear interpolants of fine midpoint states;
/// odd factors and factor 1 copy states exactly. Requires
/// margin >= factor/2 (even factor) or (factor-1)/2 (odd) on the input.
Trajectory restrict_to_coarse(const Trajectory& traj, int factor);

/// Margin required on the fine trajectory for restrict_to_coarse(., factor).
int restriction_margin(int factor);

/// Text round-trip: header lines (system, s, dt, N, seed), then one
/// comma-separated row per stored midpoint. Values are printed with 17
/// significant digits, which round-trips IEEE doubles exactly.
void save_trajectory(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory(const std::string& path);

}  // namespace lss
