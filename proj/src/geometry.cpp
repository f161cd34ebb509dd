#include "nfisac/geometry.hpp"

#include <random>

namespace nfisac {

std::vector<Point3> build_ula(const UlaSpec& spec, double axis_center_x, double y) {
    if (spec.count < 2) {
        throw InvalidSpecError("ULA needs at least 2 elements");
    }
    if (!(spec.length > 0.0)) {
        throw InvalidSpecError("ULA length must be positive");
    }
    std::vector<Point3> out(static_cast<std::size_t>(spec.count));
    const double step = spec.length / (spec.count - 1);
    for (int m = 0; m < spec.count; ++m) {
        out[static_cast<std::size_t>(m)] = {axis_center_x - spec.length / 2.0 + m * step, y, 0.0};
    }
    return out;
}

bool check_spacing(const std::vector<Point3>& points, double d_min) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (distance(points[i], points[j]) < d_min) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Point3> sample_initial_positions(const MaRegion& region, std::uint64_t rng_seed) {
    if (region.count < 1) {
        throw InvalidSpecError("region needs at least one antenna");
    }
    if (!(region.side > 0.0) || !(region.min_spacing > 0.0)) {
        throw InvalidSpecError("region side and min spacing must be positive");
    }
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> ux(region.center.x - region.side / 2.0,
                                              region.center.x + region.side / 2.0);
    std::uniform_real_distribution<double> uy(region.center.y - region.side / 2.0,
                                              region.center.y + region.side / 2.0);
    constexpr int kMaxRounds = 10000;
    std::vector<Point3> pts(static_cast<std::size_t>(region.count));
    for (int round = 0; round < kMaxRounds; ++round) {
        for (auto& p : pts) {
            p = {ux(rng), uy(rng), region.center.z};
        }
        if (check_spacing(pts, region.min_spacing)) {
            return pts;
        }
    }
    throw PackingInfeasibleError("no spacing-feasible placement found in 10000 rounds");
}

}  // namespace nfisac
