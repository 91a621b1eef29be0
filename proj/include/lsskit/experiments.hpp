#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lsskit/assembly.hpp"

namespace lss {

enum class SweepVariable { T, Dt, Alpha2 };

/// Configuration of one experiment run. Field names mirror the CLI flags and
/// the flat key=value config-file keys.
struct ExperimentConfig {
    std::string system = "lorenz63";
    SweepVariable sweep = SweepVariable::T;
    std::vector<double> values;  // T list, coarsening factors, or alpha2 list
    int ensemble = 1;
    double dt = 0.02;            // grid step; the fine step for dt sweeps
    double T = 50.0;             // fixed horizon for dt and alpha2 sweeps
    double alpha2 = 100.0;
    SchemeOrder scheme = SchemeOrder::SecondOrder;
    double bc_value = 0.0;       // adjoint boundary values bc_value * (1,..,1)
    std::uint64_t seed = 1;
    double spin_up = -1.0;       // negative: use the system default
    double true_value = std::numeric_limits<double>::quiet_NaN();  // NaN: 1 for built-ins
    bool record_lambda = false;

    void validate() const;

    /// Key=value round-trip (config files; CSV snapshot comments).
    static ExperimentConfig from_key_values(const std::map<std::string, std::string>& kv);
    std::map<std::string, std::string> to_key_values() const;
};

/// Sweep results as named columns; every row also reproduces from the
/// embedded config snapshot.
struct ExperimentTable {
    ExperimentConfig config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // -1 if absent
    std::vector<double> column(const std::string& name) const;

    /// Config snapshot as '#'-prefixed comments, a header row, then one
    /// comma-separated line per row with 17 significant digits.
    void write_csv(std::ostream& out) const;
};

/// Ensemble convergence of the adjoint sensitivity with the window length T.
/// Per T: ensemble of solves from random initial states, mean sensitivity,
/// and |mean - true|. Member m draws its initial state with
/// member_seed(config.seed, m); the same members are reused across T values,
/// so each member's windows are nested.
ExperimentTable sweep_T(const ExperimentConfig& cfg);

/// Order-of-accuracy study at fixed T. Each member integrates one fine
/// trajectory (step cfg.dt); every coarsening factor in cfg.values is solved
/// with both schemes. err_ref is |mean(djds - reference)| against the
/// second-order factor-1 solve of the same member (the discretization error
/// at fixed window); err_true is |mean - true|.
ExperimentTable sweep_dt(const ExperimentConfig& cfg);

/// Conditioning of the eliminated operator. Per sweep value (T or alpha2),
/// assembles on one trajectory and records lambda_min and 1/lambda_min; the
/// alpha2 sweep adds lambda_max and the relative condition number.
ExperimentTable sweep_condition(const ExperimentConfig& cfg);

struct DualityReport {
    double adjoint = 0.0;
    double forward = 0.0;
    double gap = 0.0;
};

/// Forward-vs-adjoint sensitivity on one random trajectory, homogeneous
/// boundary data. The gap is a machine-precision check of the transpose
/// identity between the two discrete problems.
DualityReport duality_check(const std::string& system, int n_steps, double dt, double alpha2,
                            SchemeOrder scheme, std::uint64_t seed);

struct SlopeFit {
    double overall = 0.0;
    double early_half = 0.0;  // fit over [first, mid]
    double late_half = 0.0;   // fit over [mid, last]
};

/// Least-squares slope of log|y| vs log x; zero y entries are skipped.
double fit_loglog(const std::vector<double>& x, const std::vector<double>& y, int i0, int i1);
SlopeFit fit_slopes(const std::vector<double>& x, const std::vector<double>& y);

/// Flat key=value file ('#' comments, blank lines ignored).
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Runs fn(0..count-1), possibly concurrently; results must be written to
/// per-index slots by the caller.
void parallel_for(int count, const std::function<void(int)>& fn);

/// CLI entry point (subcommands: trajectory, solve, sweep-t, sweep-dt,
/// sweep-cond, duality-check). Returns 0 on success, 1 on bad arguments,
/// 2 on numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace lss
