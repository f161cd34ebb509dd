#include "nfisac/precoder_sca.hpp"

#include <cmath>

#include "nfisac/metrics.hpp"

namespace nfisac {

namespace {

MatC hermitize(const MatC& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

ScaBound build_bound(const std::vector<MatC>& channels, const std::vector<MatC>& w_expand,
                     const std::vector<double>& weights, const MatC& v_cov,
                     const std::vector<double>& noise_vars) {
    const std::size_t n_users = channels.size();
    if (w_expand.size() != n_users || weights.size() != n_users || noise_vars.size() != n_users) {
        throw InvalidSpecError("bound inputs must have one entry per user");
    }
    const Eigen::Index n_t = channels.empty() ? 0 : channels.front().cols();

    ScaBound bound;
    bound.users.resize(n_users);
    bound.weights = weights;
    bound.quad = MatC::Zero(n_t, n_t);
    bound.constant = 0.0;

    for (std::size_t k = 0; k < n_users; ++k) {
        const MatC& h = channels[k];
        const Eigen::Index n_k = h.rows();

        MatC f = noise_vars[k] * MatC::Identity(n_k, n_k);
        for (std::size_t u = 0; u < n_users; ++u) {
            if (u == k || w_expand[u].size() == 0) continue;
            const MatC hw = h * w_expand[u];
            f.noalias() += hw * hw.adjoint();
        }
        if (v_cov.size() != 0) {
            f.noalias() += h * v_cov * h.adjoint();
        }

        const MatC hw_own = h * w_expand[k];
        MatC s = MatC::Zero(n_k, n_k);
        if (hw_own.size() != 0) {
            s.noalias() = hw_own * hw_own.adjoint();
        }

        Eigen::LLT<MatC> llt_f(f);
        Eigen::LLT<MatC> llt_fs(MatC(f + s));
        if (llt_f.info() != Eigen::Success || llt_fs.info() != Eigen::Success) {
            throw NumericError("interference covariance not positive definite");
        }
        const MatC eye = MatC::Identity(n_k, n_k);
        const MatC f_inv = llt_f.solve(eye);
        // A_k = F^{-1} - (F + S)^{-1}, PSD by construction.
        const MatC a_k = hermitize(f_inv - llt_fs.solve(eye));

        ScaUserBound& ub = bound.users[k];
        ub.quad = hermitize(h.adjoint() * a_k * h);
        ub.lin = h.adjoint() * (f_inv * hw_own);
        const MatC gain = eye + hw_own.adjoint() * f_inv * hw_own;
        ub.logdet_gain = logdet_hpd(hermitize(gain));
        ub.lin_at_expansion = std::real((hw_own.adjoint() * f_inv * hw_own).trace());
        MatC resid = noise_vars[k] * eye;
        if (v_cov.size() != 0) {
            resid.noalias() += h * v_cov * h.adjoint();
        }
        ub.const_term = std::real((a_k * resid).trace());

        bound.quad.noalias() += weights[k] * ub.quad;
        bound.constant += weights[k] * (ub.logdet_gain - ub.lin_at_expansion - ub.const_term);
    }
    bound.quad = hermitize(bound.quad);
    return bound;
}

double eval_bound_user(const ScaBound& bound, std::size_t k, const std::vector<MatC>& w) {
    const ScaUserBound& ub = bound.users.at(k);
    double val = ub.logdet_gain - ub.lin_at_expansion - ub.const_term;
    val += 2.0 * std::real((ub.lin.adjoint() * w[k]).trace());
    for (const auto& wu : w) {
        if (wu.size() == 0) continue;
        val -= std::real((wu.adjoint() * ub.quad * wu).trace());
    }
    return val;
}

double eval_bound_total(const ScaBound& bound, const std::vector<MatC>& w) {
    double val = bound.constant;
    for (std::size_t k = 0; k < bound.users.size(); ++k) {
        val += 2.0 * bound.weights[k] * std::real((bound.users[k].lin.adjoint() * w[k]).trace());
    }
    for (const auto& wu : w) {
        if (wu.size() == 0) continue;
        val -= std::real((wu.adjoint() * bound.quad * wu).trace());
    }
    return val;
}

namespace {

// Dual evaluation workspace in the eigenbasis of B. For fixed (lambda, mu)
// the per-user stationary point is (B + lambda I + mu gamma0 g g^H)^{-1} L_k,
// solved diagonally plus a rank-1 Sherman-Morrison correction.
struct DualEval {
    VecR eigs;              // eigenvalues of B
    std::vector<MatC> lin;  // U^H L_k (weights folded in)
    VecC g;                 // U^H g
    double gamma0 = 0.0;

    struct Result {
        std::vector<MatC> w;  // still in the eigenbasis
        double power = 0.0;
        double sinr_quad = 0.0;
    };

    Result solve(double lambda, double mu) const {
        Result r;
        const VecC d_inv = (eigs.array() + lambda).inverse().cast<cplx>();
        const double c = mu * gamma0;
        VecC gd;
        double denom = 1.0;
        if (c > 0.0 && g.size() > 0) {
            gd = d_inv.cwiseProduct(g);
            denom = 1.0 + c * std::real(g.dot(gd));
        }
        r.w.reserve(lin.size());
        for (const auto& l : lin) {
            MatC y = d_inv.asDiagonal() * l;
            if (c > 0.0 && g.size() > 0) {
                const Eigen::RowVectorXcd gy = g.adjoint() * y;
                y.noalias() -= gd * ((c / denom) * gy);
            }
            r.power += y.squaredNorm();
            if (g.size() > 0) {
                r.sinr_quad += (g.adjoint() * y).squaredNorm();
            }
            r.w.push_back(std::move(y));
        }
        return r;
    }
};

}  // namespace

PrecoderSolution solve_precoder_subproblem(const ScaBound& bound, const SinrConstraintData& sinr,
                                           double p_max, double gamma0, const DualOptions& opts) {
    if (!(p_max > 0.0)) {
        throw InvalidSpecError("power budget must be positive");
    }
    if (gamma0 > 0.0 && sinr.level < 0.0) {
        throw InfeasibleSubproblemError(
            "sensing constraint unsatisfiable for any precoder (negative slack)", sinr.level);
    }

    const Eigen::Index n_t = bound.quad.rows();
    Eigen::SelfAdjointEigenSolver<MatC> es(bound.quad);
    if (es.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of quadratic term failed");
    }
    const MatC& basis = es.eigenvectors();

    DualEval eval;
    eval.eigs = es.eigenvalues().cwiseMax(0.0);
    eval.gamma0 = gamma0;
    if (gamma0 > 0.0 && sinr.g.size() > 0) {
        eval.g = basis.adjoint() * sinr.g;
    }
    eval.lin.reserve(bound.users.size());
    for (std::size_t k = 0; k < bound.users.size(); ++k) {
        eval.lin.push_back(basis.adjoint() * (bound.weights[k] * bound.users[k].lin));
    }

    // Keep B + lambda I invertible; at this floor the solve acts as the
    // pseudo-inverse stationary point when both constraints are slack.
    const double trace_b = eval.eigs.sum();
    const double lambda_floor = std::max(1e-12 * trace_b / std::max<double>(1, n_t), 1e-300);
    const double cs = sinr.level;

    double lambda = lambda_floor;
    double mu = 0.0;
    DualEval::Result cur = eval.solve(lambda, mu);
    int iterations = 0;

    const auto power_ok = [&](const DualEval::Result& r) {
        return r.power <= p_max * (1.0 + opts.rel_tol);
    };
    const auto sinr_ok = [&](const DualEval::Result& r) {
        if (gamma0 <= 0.0) return true;
        return gamma0 * r.sinr_quad <= cs + opts.rel_tol * (1.0 + std::abs(cs));
    };

    for (; iterations < opts.max_outer; ++iterations) {
        // lambda block: complementary slackness for the power cap at fixed mu.
        DualEval::Result at_floor = eval.solve(lambda_floor, mu);
        if (at_floor.power <= p_max) {
            lambda = lambda_floor;
            cur = at_floor;
        } else {
            double lo = lambda_floor;
            double hi = std::max(1.0, 2.0 * lambda_floor);
            while (eval.solve(hi, mu).power > p_max) {
                hi *= 2.0;
                if (hi > 1e30) throw NumericError("power dual diverged");
            }
            for (int b = 0; b < opts.max_bisect; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (eval.solve(mid, mu).power > p_max) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (hi - lo <= opts.rel_tol * 1e-4 * std::max(1.0, hi)) break;
            }
            lambda = hi;  // feasible side
            cur = eval.solve(lambda, mu);
        }

        // mu block: complementary slackness for the SINR cap at fixed lambda.
        if (gamma0 <= 0.0 || eval.g.size() == 0) {
            mu = 0.0;
        } else {
            DualEval::Result at_zero = eval.solve(lambda, 0.0);
            if (gamma0 * at_zero.sinr_quad <= cs) {
                mu = 0.0;
                cur = at_zero;
            } else {
                double lo = 0.0;
                double hi = 1.0;
                while (gamma0 * eval.solve(lambda, hi).sinr_quad > cs) {
                    hi *= 2.0;
                    if (hi > 1e30) {
                        // cs == 0 with a forced zero overlap; accept the limit.
                        break;
                    }
                }
                for (int b = 0; b < opts.max_bisect; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    if (gamma0 * eval.solve(lambda, mid).sinr_quad > cs) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if (hi - lo <= opts.rel_tol * 1e-4 * std::max(1.0, hi)) break;
                }
                mu = hi;
                cur = eval.solve(lambda, mu);
            }
        }

        if (power_ok(cur) && sinr_ok(cur)) {
            // Complementarity residuals relative to each constraint scale.
            const double comp_pow =
                lambda > lambda_floor * 1.01 ? std::abs(p_max - cur.power) / p_max : 0.0;
            const double comp_sinr =
                mu > 0.0 ? std::abs(cs - gamma0 * cur.sinr_quad) / (1.0 + std::abs(cs)) : 0.0;
            if (comp_pow <= opts.rel_tol && comp_sinr <= opts.rel_tol) {
                ++iterations;
                break;
            }
        }
    }

    PrecoderSolution sol;
    sol.lambda = lambda <= lambda_floor * 1.01 ? 0.0 : lambda;
    sol.mu = mu;
    sol.power = cur.power;
    sol.sinr_quad = cur.sinr_quad;
    sol.dual_iterations = iterations;
    sol.w.reserve(cur.w.size());
    for (auto& wk : cur.w) {
        sol.w.push_back(basis * wk);
    }
    sol.objective = eval_bound_total(bound, sol.w);
    return sol;
}

}  // namespace nfisac
