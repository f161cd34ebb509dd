#pragma once

#include <functional>
#include <vector>

#include "nfisac/geometry.hpp"
#include "nfisac/types.hpp"

namespace nfisac {

struct PgmParams {
    double initial_step = 1.0;        // meters
    double shrink = 0.5;              // tau in (0, 1)
    double sufficient_increase = 1e-2;  // delta in the Armijo-Goldstein test
    int max_backtracks = 60;
    double min_step = 1e-12;
};

/// Closed-form gradient of the user rate w.r.t. the stacked MA coordinates
/// [x_1, y_1, 0, ..., x_Nk, y_Nk, 0]; z slots are exactly zero. The sensing
/// beam enters through its covariance (pass v v^H for a vector beam).
VecR rate_gradient(const std::vector<Point3>& q, const std::vector<Point3>& tx,
                   double wavelength, double amplitude, const std::vector<MatC>& w,
                   std::size_t k, const MatC& v_cov, double noise_var);

/// Element-wise clamp of x and y to the region box; z forced to the region plane.
std::vector<Point3> project_region(std::vector<Point3> q, const MaRegion& region);

using RateFn = std::function<double(const std::vector<Point3>&)>;

struct PgmStepResult {
    std::vector<Point3> q;
    double rate_after = 0.0;
    double step_used = 0.0;   // the accepted step size (0 when not accepted)
    double step_next = 0.0;   // persisted step size for the next call
    bool accepted = false;
    int backtracks = 0;
};

/// One projected-gradient trial: shrink the step until both the spacing
/// constraint and the sufficient-increase condition hold at the projected
/// point, or the step underflows (identity step, rate unchanged).
PgmStepResult pgm_step(const std::vector<Point3>& q, const VecR& gradient, double step,
                       const PgmParams& params, const MaRegion& region, double d_min,
                       const RateFn& rate_fn);

}  // namespace nfisac
