#pragma once

#include <vector>

#include "nfisac/types.hpp"

namespace nfisac {

/// Spherical-wave user channel: entry (b, m) = amplitude * exp(j 2pi |t_m - q_b| / lambda).
struct UserChannel {
    MatC matrix;           // N_k x N_t
    double amplitude = 0;  // common entry modulus
};

/// Rank-1 two-hop sensing channel G = amplitude * f_r f_t^H.
struct SensingChannel {
    MatC matrix;       // N_r x N_t
    VecC tx_response;  // f_t, unit-modulus entries
    VecC rx_response;  // f_r
    double amplitude = 0;
};

/// Free-space power path loss lambda^2 / (4 pi d)^2.
double user_path_loss(double wavelength, double d_tk);

/// Round-trip power path loss lambda^2 / ((4 pi)^3 R_t^2 R_r^2).
double sensing_path_loss(double wavelength, double range_tx, double range_rx);

UserChannel build_user_channel(const std::vector<Point3>& tx, const std::vector<Point3>& q,
                               double wavelength, double amplitude);

SensingChannel build_sensing_channel(const std::vector<Point3>& tx, const std::vector<Point3>& rx,
                                     const Point3& target, double wavelength, double amplitude);

}  // namespace nfisac
