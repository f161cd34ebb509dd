#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nfisac/channel.hpp"
#include "nfisac/config.hpp"
#include "nfisac/geometry.hpp"
#include "nfisac/types.hpp"

namespace nfisac {

struct DesignState {
    VecC u;              // receive combiner, unit norm
    std::vector<MatC> w; // per-user precoders, N_t x N_k
    MatC v_cov;          // sensing covariance (SDR variable), PSD, Tr <= 1
    std::vector<std::vector<Point3>> q;  // per-user MA positions
};

struct ChannelSet {
    std::vector<UserChannel> users;
    SensingChannel sensing;
};

enum class RunStatus { ok, run_failed, infeasible_init };

struct IterationRecord {
    int iteration = 0;
    double wsr = 0.0;
    std::vector<double> rates;
    double sinr = 0.0;      // SDR form
    double sensing_power = 0.0;
    double power_used = 0.0;
    std::vector<double> pgm_steps;  // last accepted step size per user
};

struct AoResult {
    RunStatus status = RunStatus::ok;
    std::string message;
    bool converged = false;
    int iterations = 0;
    DesignState state;
    ChannelSet channels;
    std::vector<IterationRecord> trace;  // entry 0 is the initial point
    double wsr = 0.0;
    std::vector<double> rates;
    double sinr_sdr = 0.0;
    double sensing_power = 0.0;
    double power_used = 0.0;
    VecC v;                    // extracted beamformer (empty when sensing off)
    double sinr_extracted = 0.0;
    double rank_ratio = 1.0;
};

struct RunOptions {
    bool move_antennas = true;  // false reproduces the fixed-antenna benchmark
};

/// Channels for the given MA placement.
ChannelSet build_channels(const SystemConfig& cfg, const AntennaLayout& layout,
                          const std::vector<std::vector<Point3>>& q);

/// Feasible starting point: random spaced MA placements, matched-filter
/// sensing covariance, per-user right-singular precoders scaled to share the
/// power budget and then uniformly down-scaled (binary search) until the
/// sensing constraint holds under the optimal combiner. Throws
/// InfeasibleConfigError when no down-scaling achieves it.
std::pair<DesignState, ChannelSet> initialize(const SystemConfig& cfg,
                                              const AntennaLayout& layout, std::uint64_t seed);

/// Alternating optimization: combiner, precoder SCA, beamformer SDR/penalty,
/// then per-user projected-gradient position steps, until the relative WSR
/// change drops below the tolerance.
AoResult run(const SystemConfig& cfg, std::uint64_t seed, const RunOptions& opts = {});

}  // namespace nfisac
