#include "nfisac/ma_position.hpp"

#include <cmath>
#include <numbers>

#include "nfisac/channel.hpp"

namespace nfisac {

VecR rate_gradient(const std::vector<Point3>& q, const std::vector<Point3>& tx,
                   double wavelength, double amplitude, const std::vector<MatC>& w,
                   std::size_t k, const MatC& v_cov, double noise_var) {
    if (k >= w.size()) {
        throw InvalidSpecError("user index out of range");
    }
    const Eigen::Index n_t = static_cast<Eigen::Index>(tx.size());
    const Eigen::Index n_k = static_cast<Eigen::Index>(q.size());

    const MatC h = build_user_channel(tx, q, wavelength, amplitude).matrix;

    MatC t1 = v_cov.size() != 0 ? MatC(v_cov) : MatC(MatC::Zero(n_t, n_t));
    for (const auto& wu : w) {
        if (wu.size() == 0) continue;
        t1.noalias() += wu * wu.adjoint();
    }
    MatC t2 = t1;
    if (w[k].size() != 0) {
        t2.noalias() -= w[k] * w[k].adjoint();
    }

    const MatC eye = MatC::Identity(n_k, n_k);
    const MatC a1 = h * t1 * h.adjoint() + noise_var * eye;
    const MatC a2 = h * t2 * h.adjoint() + noise_var * eye;
    Eigen::LLT<MatC> llt1(0.5 * (a1 + a1.adjoint()));
    Eigen::LLT<MatC> llt2(0.5 * (a2 + a2.adjoint()));
    if (llt1.info() != Eigen::Success || llt2.info() != Eigen::Success) {
        throw NumericError("rate covariance not positive definite");
    }
    // C_1 = T_1 H^H A_1^{-1}, C_2 = T_2 H^H A_2^{-1} (N_t x N_k).
    const MatC c1 = (llt1.solve(h * t1)).adjoint();
    const MatC c2 = (llt2.solve(h * t2)).adjoint();
    const MatC coeff = c2 - c1;

    const double two_pi = 2.0 * std::numbers::pi;
    const double prefactor = 2.0 * two_pi * amplitude / wavelength;  // 4 pi rho / lambda

    VecR grad = VecR::Zero(3 * n_k);
    for (Eigen::Index b = 0; b < n_k; ++b) {
        cplx acc_x = 0.0;
        cplx acc_y = 0.0;
        for (Eigen::Index m = 0; m < n_t; ++m) {
            const double d = distance(tx[static_cast<std::size_t>(m)],
                                      q[static_cast<std::size_t>(b)]);
            if (d == 0.0) {
                throw NumericError("MA coincides with a transmit element");
            }
            const cplx ph = std::polar(1.0, two_pi / wavelength * d);
            const cplx c = coeff(m, b) * ph / d;
            acc_x += c * (q[static_cast<std::size_t>(b)].x - tx[static_cast<std::size_t>(m)].x);
            acc_y += c * (q[static_cast<std::size_t>(b)].y - tx[static_cast<std::size_t>(m)].y);
        }
        grad(3 * b) = prefactor * std::imag(acc_x);
        grad(3 * b + 1) = prefactor * std::imag(acc_y);
    }
    return grad;
}

std::vector<Point3> project_region(std::vector<Point3> q, const MaRegion& region) {
    const double x_lo = region.center.x - region.side / 2.0;
    const double x_hi = region.center.x + region.side / 2.0;
    const double y_lo = region.center.y - region.side / 2.0;
    const double y_hi = region.center.y + region.side / 2.0;
    for (auto& p : q) {
        p.x = std::clamp(p.x, x_lo, x_hi);
        p.y = std::clamp(p.y, y_lo, y_hi);
        p.z = region.center.z;
    }
    return q;
}

PgmStepResult pgm_step(const std::vector<Point3>& q, const VecR& gradient, double step,
                       const PgmParams& params, const MaRegion& region, double d_min,
                       const RateFn& rate_fn) {
    if (gradient.size() != static_cast<Eigen::Index>(3 * q.size())) {
        throw InvalidSpecError("gradient length must be 3 * number of antennas");
    }
    PgmStepResult res;
    const double rate_before = rate_fn(q);

    for (int bt = 0; bt <= params.max_backtracks && step >= params.min_step; ++bt) {
        std::vector<Point3> trial = q;
        for (std::size_t b = 0; b < q.size(); ++b) {
            trial[b].x += step * gradient(static_cast<Eigen::Index>(3 * b));
            trial[b].y += step * gradient(static_cast<Eigen::Index>(3 * b + 1));
        }
        trial = project_region(std::move(trial), region);
        if (check_spacing(trial, d_min)) {
            double move2 = 0.0;
            for (std::size_t b = 0; b < q.size(); ++b) {
                const double dx = trial[b].x - q[b].x;
                const double dy = trial[b].y - q[b].y;
                move2 += dx * dx + dy * dy;
            }
            const double rate_after = rate_fn(trial);
            if (rate_after - rate_before >= params.sufficient_increase * move2) {
                res.q = std::move(trial);
                res.rate_after = rate_after;
                res.step_used = step;
                res.step_next = step;
                res.accepted = true;
                res.backtracks = bt;
                return res;
            }
        }
        step *= params.shrink;
        res.backtracks = bt + 1;
    }

    res.q = q;
    res.rate_after = rate_before;
    res.step_used = 0.0;
    res.step_next = step;
    res.accepted = false;
    return res;
}

}  // namespace nfisac
