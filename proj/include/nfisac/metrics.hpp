#pragma once

#include <vector>

#include "nfisac/types.hpp"

namespace nfisac {

/// ln det of a Hermitian positive definite matrix via Cholesky.
double logdet_hpd(const MatC& a);

/// Achievable rate of user k in nats, sensing beam given as a vector v.
/// R_k = ln|A_full| - ln|A_intf| with A_intf = sum_{u != k} H W_u W_u^H H^H
///       + H v v^H H^H + noise_var I and A_full = A_intf + H W_k W_k^H H^H.
double user_rate(const MatC& h_k, const std::vector<MatC>& w, std::size_t k, const VecC& v,
                 double noise_var);

/// Same with the sensing covariance V in place of v v^H.
double user_rate_sdr(const MatC& h_k, const std::vector<MatC>& w, std::size_t k, const MatC& v_cov,
                     double noise_var);

double wsr(const std::vector<double>& weights, const std::vector<double>& rates);

struct SensingEval {
    double sinr = 0.0;
    double power = 0.0;  // numerator |u^H G v|^2 (or u^H G V G^H u)
};

/// Receive SINR |u^H G v|^2 / (sum_k |W_k^H G^H u|^2 + noise_var |u|^2).
SensingEval sensing_sinr(const VecC& u, const MatC& g, const std::vector<MatC>& w, const VecC& v,
                         double noise_var);

/// SDR form with numerator (G^H u)^H V (G^H u).
SensingEval sensing_sinr_sdr(const VecC& u, const MatC& g, const std::vector<MatC>& w,
                             const MatC& v_cov, double noise_var);

}  // namespace nfisac
