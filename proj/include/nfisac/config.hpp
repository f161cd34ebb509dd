#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nfisac/geometry.hpp"
#include "nfisac/ma_position.hpp"
#include "nfisac/types.hpp"

namespace nfisac {

/// Propagation constant used to derive the wavelength from the carrier.
inline constexpr double kSpeedOfLight = 3.0e8;

struct SolverOptions {
    double wsr_rel_tol = 1e-4;
    int max_iterations = 50;
    int sca_max_inner = 60;    // precoder bound refreshes per AO iteration
    int v_max_inner = 8;       // beamformer bound refreshes per AO iteration
    int pgm_max_inner = 200;   // accepted position steps per user per AO iteration
    double block_exit_factor = 0.02;  // inner loops stop below this fraction of wsr_rel_tol
    bool pgm_reset_step = false;      // restore the initial step each AO iteration
    double dual_rel_tol = 1e-8;
    int dual_max_iterations = 200;
    int v_solver_max_iterations = 500;
    double v_solver_residual_tol = 1e-6;
    double dykstra_tol = 1e-10;
};

struct SystemConfig {
    double f_ghz = 30.0;
    int n_tx = 8;
    int n_rx = 8;
    int n_users = 2;
    std::vector<int> n_ma = {2, 2};          // antennas per user
    std::vector<double> weights = {0.5, 0.5};
    double p_max_w = 1.0;
    double d_min_m = 0.005;                  // lambda/2 at 30 GHz
    double gamma0 = 0.01;
    double eta = 1.0;
    std::vector<double> noise_user_db = {-100.0, -100.0};
    double noise_sense_db = -100.0;
    Point3 bs_tx_center = {-3.0, 10.0, 0.0};
    Point3 bs_rx_center = {3.0, 10.0, 0.0};
    double tx_length_m = 1.0;
    double rx_length_m = 1.0;
    std::vector<Point3> user_centers = {{-4.0, 1.5, 15.0}, {2.0, 1.5, 20.0}};
    std::vector<double> region_side_m = {0.2, 0.2};
    Point3 target = {10.0, 1.5, 10.0};
    PgmParams pgm;
    SolverOptions solver;

    double wavelength() const { return kSpeedOfLight / (f_ghz * 1e9); }
    double noise_user_var(std::size_t k) const;
    double noise_sense_var() const;

    /// Throws InvalidSpecError when any invariant is violated.
    void validate() const;

    /// BS arrays, per-user MA regions and the target, derived from the config.
    AntennaLayout layout() const;
};

/// Parses the flat `key = value` format; '#' starts a comment. Unknown keys
/// and malformed values raise ConfigParseError with the line number. Omitted
/// keys keep their defaults.
SystemConfig parse_config(std::string_view text);

/// Convenience: read a file and parse it.
SystemConfig parse_config_file(const std::string& path);

}  // namespace nfisac
