#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nfisac/ao.hpp"
#include "nfisac/config.hpp"

namespace nfisac {

enum class ExperimentId { convergence, nk_sweep, weight_sweep, power_sweep, sinr_sweep };

ExperimentId experiment_from_name(const std::string& name);
std::string experiment_name(ExperimentId id);

struct ExperimentSpec {
    ExperimentId id = ExperimentId::convergence;
    SystemConfig base;
    std::uint64_t master_seed = 1;
    int realizations = 50;
    bool fix_ant_only = false;  // emit only the fixed-antenna variant
    std::string output_path;

    // Sweep grids; the id picks which one applies.
    std::vector<int> nk_grid = {1, 2, 3, 4};
    std::vector<double> w1_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> pmax_grid = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> gamma0_db_grid = {-40.0, -30.0, -25.0, -20.0, -15.0, -10.0, -7.0, -5.0};
};

struct RealizationRow {
    std::string variant;     // proposed | fix_user_ant
    std::string grid_param;
    double grid_value = 0.0;
    int realization = 0;     // -1 mean row, -2 standard-error row
    std::uint64_t seed = 0;
    RunStatus status = RunStatus::ok;
    bool converged = false;
    int iterations = 0;
    double wsr_nats = 0.0;
    std::vector<double> rates;
    double sinr = 0.0;
    double sensing_power = 0.0;
    double power_used = 0.0;
    double rank_ratio = 0.0;
    std::vector<double> trace;  // per-iteration WSR (convergence experiment)
};

struct ExperimentResult {
    std::vector<RealizationRow> rows;  // deterministic order, aggregates included
    int failed = 0;
    int total = 0;
};

/// Runs the Monte-Carlo study and writes the CSV file(s): `output_path` for
/// the per-realization summary, and `<output_path stem>_trace.csv` with the
/// per-iteration WSR curves for the convergence experiment.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace nfisac
