#include "lsskit/trajectory.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lss {

namespace {
constexpr double kBlowUpLimit = 1e8;

void check_finite(const Vec& u, double t) {
    if (!u.allFinite() || u.lpNorm<Eigen::Infinity>() > kBlowUpLimit) {
        throw BlowUpError("trajectory blew up at t = " + std::to_string(t), t);
    }
}
}  // namespace

Trajectory::Trajectory(TimeGrid grid, int margin, std::vector<Vec> midpoints,
                       std::string system_name, double s, std::uint64_t seed)
    : grid_(grid), margin_(margin), mids_(std::move(midpoints)),
      system_(std::move(system_name)), s_(s), seed_(seed) {
    const std::size_t expected = static_cast<std::size_t>(grid_.n_steps + 2 + 2 * margin_);
    if (mids_.size() != expected) {
        throw ContractViolation("trajectory storage holds " + std::to_string(mids_.size()) +
                                " midpoints, expected " + std::to_string(expected));
    }
}

void Trajectory::require_midpoint(int j) const {
    if (j < min_midpoint_index() || j > max_midpoint_index()) {
        throw ContractViolation("midpoint index " + std::to_string(j) + " outside stored range [" +
                                std::to_string(min_midpoint_index()) + ", " +
                                std::to_string(max_midpoint_index()) + "]");
    }
}

const Vec& Trajectory::midpoint(int j) const {
    require_midpoint(j);
    return mids_[static_cast<std::size_t>(j + 1 + margin_)];
}

Vec Trajectory::node_state(int i) const {
    return 0.5 * (midpoint(i - 1) + midpoint(i));
}

Vec Trajectory::node_velocity(int i) const {
    return (midpoint(i) - midpoint(i - 1)) / grid_.dt;
}

Vec rk4_step(const DynamicalSystem& sys, const Vec& u, double s, double h) {
    const Vec k1 = sys.f(u, s);
    const Vec k2 = sys.f(u + 0.5 * h * k1, s);
    const Vec k3 = sys.f(u + 0.5 * h * k2, s);
    const Vec k4 = sys.f(u + h * k3, s);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec advance(const DynamicalSystem& sys, Vec u, double s, double t_len, int n_sub) {
    const double h = t_len / n_sub;
    for (int i = 0; i < n_sub; ++i) u = rk4_step(sys, u, s, h);
    return u;
}

Trajectory integrate(const DynamicalSystem& sys, const Vec& u0, const TimeGrid& grid,
                     double spin_up, std::uint64_t rng_seed, int margin) {
    if (grid.dt <= 0.0) throw ContractViolation("dt must be positive");
    if (grid.n_steps < 2) throw ContractViolation("need at least 2 time steps");
    if (spin_up < 0.0) throw ContractViolation("spin_up must be nonnegative");
    if (margin < 0) throw ContractViolation("margin must be nonnegative");
    if (!u0.allFinite()) throw ContractViolation("initial state is not finite");
    sys.f(u0, sys.param());  // dimension check

    const double s = sys.param();
    const double h = grid.dt / 2.0;
    Vec u = u0;

    // Spin-up ends one full step before the first stored midpoint; substep
    // chosen <= dt/2 and dividing the spin-up length exactly.
    double t = -(1.0 + margin) * grid.dt - spin_up;
    if (spin_up > 0.0) {
        const int n_spin = static_cast<int>(std::ceil(spin_up / h));
        const double h_spin = spin_up / n_spin;
        for (int i = 0; i < n_spin; ++i) {
            u = rk4_step(sys, u, s, h_spin);
            t += h_spin;
            check_finite(u, t);
        }
    }

    std::vector<Vec> mids;
    mids.reserve(static_cast<std::size_t>(grid.n_steps + 2 + 2 * margin));
    u = rk4_step(sys, u, s, h);  // advance dt/2 onto the first midpoint
    t += h;
    check_finite(u, t);
    mids.push_back(u);
    for (int k = 0; k < grid.n_steps + 1 + 2 * margin; ++k) {
        u = rk4_step(sys, u, s, h);
        u = rk4_step(sys, u, s, h);
        t += grid.dt;
        check_finite(u, t);
        mids.push_back(u);
    }
    return Trajectory(grid, margin, std::move(mids), sys.name(), s, rng_seed);
}

int restriction_margin(int factor) {
    return factor % 2 == 0 ? factor / 2 : (factor - 1) / 2;
}

Trajectory restrict_to_coarse(const Trajectory& traj, int factor) {
    if (factor < 1) throw ContractViolation("coarsening factor must be >= 1");
    if (traj.n_steps() % factor != 0) {
        throw ContractViolation("factor " + std::to_string(factor) + " does not divide N = " +
                                std::to_string(traj.n_steps()));
    }
    if (factor == 1) return traj;
    if (traj.margin() < restriction_margin(factor)) {
        throw ContractViolation("restriction by factor " + std::to_string(factor) +
                                " needs margin >= " + std::to_string(restriction_margin(factor)) +
                                ", trajectory has " + std::to_string(traj.margin()));
    }

    const int coarse_steps = traj.n_steps() / factor;
    std::vector<Vec> mids;
    mids.reserve(static_cast<std::size_t>(coarse_steps + 2));
    for (int j = -1; j <= coarse_steps; ++j) {
        // Coarse midpoint (j + 1/2)*factor*dt sits at fine position p.
        const double p = (j + 0.5) * factor - 0.5;
        const int lo = static_cast<int>(std::floor(p));
        const double w = p - lo;
        if (w == 0.0) {
            mids.push_back(traj.midpoint(lo));
        } else {
            mids.push_back((1.0 - w) * traj.midpoint(lo) + w * traj.midpoint(lo + 1));
        }
    }
    TimeGrid coarse{traj.dt() * factor, coarse_steps};
    return Trajectory(coarse, 0, std::move(mids), traj.system_name(), traj.parameter(),
                      traj.seed());
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

void save_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "# lsskit trajectory v1\n";
    out << "system," << traj.system_name() << "\n";
    out << "s," << fmt17(traj.parameter()) << "\n";
    out << "dt," << fmt17(traj.dt()) << "\n";
    out << "N," << traj.n_steps() << "\n";
    out << "seed," << traj.seed() << "\n";
    for (const Vec& u : traj.storage()) {
        for (int i = 0; i < u.size(); ++i) out << (i ? "," : "") << fmt17(u[i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Trajectory load_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    std::string system;
    double s = 0.0, dt = 0.0;
    int n_steps = -1;
    std::uint64_t seed = 0;
    std::vector<Vec> mids;

    auto value_of = [](const std::string& l) { return l.substr(l.find(',') + 1); };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("system,", 0) == 0) {
            system = value_of(line);
        } else if (line.rfind("s,", 0) == 0) {
            s = std::strtod(value_of(line).c_str(), nullptr);
        } else if (line.rfind("dt,", 0) == 0) {
            dt = std::strtod(value_of(line).c_str(), nullptr);
        } else if (line.rfind("N,", 0) == 0) {
            n_steps = std::stoi(value_of(line));
        } else if (line.rfind("seed,", 0) == 0) {
            seed = std::strtoull(value_of(line).c_str(), nullptr, 10);
        } else {
            std::stringstream ss(line);
            std::string cell;
            std::vector<double> vals;
            while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
            Vec u(static_cast<int>(vals.size()));
            for (std::size_t i = 0; i < vals.size(); ++i) u[static_cast<int>(i)] = vals[i];
            mids.push_back(std::move(u));
        }
    }
    if (n_steps < 2 || dt <= 0.0) throw std::runtime_error("malformed trajectory file " + path);
    const int extra = static_cast<int>(mids.size()) - (n_steps + 2);
    if (extra < 0 || extra % 2 != 0) {
        throw std::runtime_error("trajectory file " + path + " has inconsistent row count");
    }
    return Trajectory(TimeGrid{dt, n_steps}, extra / 2, std::move(mids), system, s, seed);
}

}  // namespace lss
