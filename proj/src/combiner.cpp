#include "nfisac/combiner.hpp"

#include <cmath>

namespace nfisac {

VecC phase_normalize(VecC v) {
    const double norm = v.norm();
    if (norm == 0.0) {
        return v;
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12 * norm) {
            v *= std::polar(1.0, -std::arg(v(i)));
            break;
        }
    }
    return v;
}

VecC optimal_combiner(const MatC& g, const std::vector<MatC>& w, const VecC& f_r,
                      double noise_var) {
    if (!(noise_var > 0.0)) {
        throw InvalidSpecError("sensing noise variance must be positive");
    }
    const Eigen::Index n = g.rows();
    MatC d = noise_var * MatC::Identity(n, n);
    for (const auto& wk : w) {
        if (wk.size() == 0) continue;
        const MatC gw = g * wk;
        d.noalias() += gw * gw.adjoint();
    }
    Eigen::LLT<MatC> llt(d);
    if (llt.info() != Eigen::Success) {
        throw NumericError("combiner covariance not positive definite");
    }
    VecC u = llt.solve(f_r);
    const double norm = u.norm();
    if (!(norm > 0.0) || !u.allFinite()) {
        throw NumericError("combiner solve produced a degenerate vector");
    }
    return phase_normalize(u / norm);
}

}  // namespace nfisac
