#pragma once

#include <cstdint>
#include <vector>

#include "nfisac/types.hpp"

namespace nfisac {

/// Uniform linear array along the x-axis.
struct UlaSpec {
    double length = 1.0;  // end-to-end, meters
    int count = 2;
};

/// Square movable-antenna region parallel to the xy-plane at fixed z.
struct MaRegion {
    Point3 center;
    double side = 0.2;
    int count = 1;
    double min_spacing = 0.005;
};

struct AntennaLayout {
    std::vector<Point3> tx;
    std::vector<Point3> rx;
    std::vector<MaRegion> regions;  // one per user
    Point3 target;
};

/// Element positions x_m = center_x - L/2 + (m-1) L/(N-1), shared y, z = 0.
std::vector<Point3> build_ula(const UlaSpec& spec, double axis_center_x, double y);

/// Uniform draws inside the region, whole set resampled until the pairwise
/// spacing holds. Deterministic in the seed; throws PackingInfeasibleError
/// after 10000 rejected rounds.
std::vector<Point3> sample_initial_positions(const MaRegion& region, std::uint64_t rng_seed);

/// True iff every distinct pair is at Euclidean distance >= d_min.
bool check_spacing(const std::vector<Point3>& points, double d_min);

}  // namespace nfisac
