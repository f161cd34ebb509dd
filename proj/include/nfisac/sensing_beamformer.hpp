#pragma once

#include <utility>
#include <vector>

#include "nfisac/precoder_sca.hpp"
#include "nfisac/types.hpp"

namespace nfisac {

/// Concave surrogate of the penalized beamformer objective around V^(n):
/// sum_k w_k [ln|C_k + H_k V H_k^H| - ln|B_k(V^n)| - Tr(M_k (V - V^n))]
/// + eta [beta_max(V^n) + Tr(chi chi^H (V - V^n)) - Tr(V)].
struct VBound {
    std::vector<MatC> channels;       // H_k
    std::vector<MatC> total_cov;      // C_k = sum_u H W_u W_u^H H^H + noise I
    std::vector<MatC> taylor_coeff;   // M_k = H^H B_k(V^n)^{-1} H
    std::vector<double> logdet_expansion;  // ln|B_k(V^n)|
    std::vector<double> weights;
    MatC expansion;       // V^(n)
    double beta_max = 0;  // largest eigenvalue of V^(n)
    VecC chi;             // its unit eigenvector
    double eta = 1.0;
};

VBound build_v_bound(const std::vector<MatC>& channels, const std::vector<MatC>& w,
                     const MatC& v_expand, const std::vector<double>& weights,
                     const std::vector<double>& noise_vars, double eta);

/// Surrogate rate of user k at V (unweighted).
double eval_v_bound_user(const VBound& bound, std::size_t k, const MatC& v_cov);

/// Penalty minorant M(V).
double eval_v_penalty(const VBound& bound, const MatC& v_cov);

/// Full surrogate objective sum_k w_k Rbar_k + eta M.
double eval_v_objective(const VBound& bound, const MatC& v_cov);

/// Euclidean gradient of the surrogate objective (Hermitian).
MatC v_objective_gradient(const VBound& bound, const MatC& v_cov);

struct VSolverOptions {
    int max_iterations = 500;
    int max_backtracks = 60;
    double residual_tol = 1e-6;
    int dykstra_max_iterations = 400;
    double dykstra_tol = 1e-10;
};

struct VSolution {
    MatC v_cov;
    double objective = 0.0;
    int iterations = 0;
    bool trace_active = false;
    bool sinr_active = false;
};

/// Nearest matrix in {PSD} ∩ {Tr <= cap} ∩ {g^H V g >= level} by Dykstra's
/// alternating projections.
MatC project_feasible(const MatC& v_cov, const SinrConstraintData& sinr, double trace_cap,
                      const VSolverOptions& opts = {});

/// Projected gradient ascent on the surrogate objective over the
/// intersection above. sinr.level is the beamformer-form threshold c;
/// throws InfeasibleSubproblemError when c > |g|^2 trace_cap. Starts from
/// the bound's expansion point unless `start` is given.
VSolution solve_v_subproblem(const VBound& bound, const SinrConstraintData& sinr,
                             double trace_cap = 1.0, const VSolverOptions& opts = {},
                             const MatC* start = nullptr);

/// Dominant unit eigenvector (phase-normalized) and beta_max(V)/Tr(V).
std::pair<VecC, double> extract_beamformer(const MatC& v_cov);

}  // namespace nfisac
