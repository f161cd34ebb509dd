#include "nfisac/metrics.hpp"

#include <cmath>

namespace nfisac {

double logdet_hpd(const MatC& a) {
    Eigen::LLT<MatC> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NumericError("Cholesky failed on a matrix expected to be positive definite");
    }
    double acc = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        acc += std::log(std::real(l(i, i)));
    }
    return 2.0 * acc;
}

namespace {

// sum_u H W_u W_u^H H^H + H V H^H + noise I, optionally excluding user `skip`.
MatC noise_plus_signal_cov(const MatC& h, const std::vector<MatC>& w, std::ptrdiff_t skip,
                           const MatC& v_cov, double noise_var) {
    const Eigen::Index n = h.rows();
    MatC acc = MatC::Zero(n, n);
    for (std::size_t u = 0; u < w.size(); ++u) {
        if (static_cast<std::ptrdiff_t>(u) == skip) continue;
        if (w[u].size() == 0) continue;
        const MatC hw = h * w[u];
        acc.noalias() += hw * hw.adjoint();
    }
    if (v_cov.size() != 0) {
        acc.noalias() += h * v_cov * h.adjoint();
    }
    acc += noise_var * MatC::Identity(n, n);
    return acc;
}

double rate_impl(const MatC& h_k, const std::vector<MatC>& w, std::size_t k, const MatC& v_cov,
                 double noise_var) {
    if (k >= w.size()) {
        throw InvalidSpecError("user index out of range");
    }
    if (!(noise_var > 0.0)) {
        throw InvalidSpecError("noise variance must be positive");
    }
    if (!h_k.allFinite()) {
        throw NumericError("non-finite channel matrix");
    }
    MatC intf = noise_plus_signal_cov(h_k, w, static_cast<std::ptrdiff_t>(k), v_cov, noise_var);
    MatC full = intf;
    if (w[k].size() != 0) {
        const MatC hw = h_k * w[k];
        full.noalias() += hw * hw.adjoint();
    }
    return logdet_hpd(full) - logdet_hpd(intf);
}

}  // namespace

double user_rate(const MatC& h_k, const std::vector<MatC>& w, std::size_t k, const VecC& v,
                 double noise_var) {
    MatC v_cov;
    if (v.size() != 0) {
        v_cov = v * v.adjoint();
    }
    return rate_impl(h_k, w, k, v_cov, noise_var);
}

double user_rate_sdr(const MatC& h_k, const std::vector<MatC>& w, std::size_t k, const MatC& v_cov,
                     double noise_var) {
    return rate_impl(h_k, w, k, v_cov, noise_var);
}

double wsr(const std::vector<double>& weights, const std::vector<double>& rates) {
    if (weights.size() != rates.size()) {
        throw InvalidSpecError("weights/rates length mismatch");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k] * rates[k];
    }
    return acc;
}

namespace {

double sinr_denominator(const VecC& u, const MatC& g, const std::vector<MatC>& w,
                        double noise_var) {
    const VecC gu = g.adjoint() * u;
    double acc = noise_var * u.squaredNorm();
    for (const auto& wk : w) {
        if (wk.size() == 0) continue;
        acc += (wk.adjoint() * gu).squaredNorm();
    }
    return acc;
}

}  // namespace

SensingEval sensing_sinr(const VecC& u, const MatC& g, const std::vector<MatC>& w, const VecC& v,
                         double noise_var) {
    SensingEval out;
    const cplx num = u.adjoint() * g * v;
    out.power = std::norm(num);
    const double den = sinr_denominator(u, g, w, noise_var);
    out.sinr = den > 0.0 ? out.power / den : 0.0;
    return out;
}

SensingEval sensing_sinr_sdr(const VecC& u, const MatC& g, const std::vector<MatC>& w,
                             const MatC& v_cov, double noise_var) {
    SensingEval out;
    const VecC gu = g.adjoint() * u;
    out.power = std::real(gu.dot(v_cov * gu));
    const double den = sinr_denominator(u, g, w, noise_var);
    out.sinr = den > 0.0 ? out.power / den : 0.0;
    return out;
}

}  // namespace nfisac
