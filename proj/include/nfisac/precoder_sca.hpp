#pragma once

#include <vector>

#include "nfisac/types.hpp"

namespace nfisac {

/// Sensing-SINR constraint data shared by the precoder and beamformer steps:
/// precoder form   gamma_0 sum_u |W_u^H g|^2 <= level (level = c_s),
/// beamformer form g^H V g >= level           (level = c).
struct SinrConstraintData {
    VecC g;  // G^H u
    double level = 0.0;
};

/// Per-user pieces of the concave rate minorant around the expansion point.
struct ScaUserBound {
    MatC quad;          // H^H A_k H, Hermitian PSD (unweighted)
    MatC lin;           // H^H F_k^{-1} H W_k^(n) (unweighted)
    double logdet_gain = 0.0;  // ln|I + W^(n)H H^H F^{-1} H W^(n)|
    double lin_at_expansion = 0.0;
    double const_term = 0.0;   // Tr(A_k (H V H^H + noise I))
};

/// WSR minorant: sum_k w_k R_hat_k(W) =
/// constant + sum_k [2 Re Tr(L_k^H W_k) - Tr(W_k^H B W_k)]
/// with L_k = w_k * users[k].lin and B = sum_k w_k users[k].quad.
struct ScaBound {
    std::vector<ScaUserBound> users;
    std::vector<double> weights;
    MatC quad;             // B, shared across users
    double constant = 0.0; // c_0
};

ScaBound build_bound(const std::vector<MatC>& channels, const std::vector<MatC>& w_expand,
                     const std::vector<double>& weights, const MatC& v_cov,
                     const std::vector<double>& noise_vars);

/// R_hat_k(W): the k-th user's surrogate rate (unweighted).
double eval_bound_user(const ScaBound& bound, std::size_t k, const std::vector<MatC>& w);

/// Aggregate surrogate WSR.
double eval_bound_total(const ScaBound& bound, const std::vector<MatC>& w);

struct DualOptions {
    int max_outer = 200;
    int max_bisect = 120;
    double rel_tol = 1e-8;
};

struct PrecoderSolution {
    std::vector<MatC> w;
    double lambda = 0.0;  // power dual
    double mu = 0.0;      // SINR dual
    double power = 0.0;
    double sinr_quad = 0.0;  // sum_u |W_u^H g|^2
    double objective = 0.0;  // surrogate WSR at the solution
    int dual_iterations = 0;
};

/// Maximizes the surrogate WSR subject to the sum-power cap and the
/// precoder-form SINR constraint, by exact coordinate bisection on the
/// two-variable concave dual. Throws InfeasibleSubproblemError when
/// sinr.level < 0 (even W = 0 violates the constraint).
PrecoderSolution solve_precoder_subproblem(const ScaBound& bound, const SinrConstraintData& sinr,
                                           double p_max, double gamma0,
                                           const DualOptions& opts = {});

}  // namespace nfisac
