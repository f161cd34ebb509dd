#include "nfisac/sensing_beamformer.hpp"

#include <cmath>

#include "nfisac/combiner.hpp"
#include "nfisac/metrics.hpp"

namespace nfisac {

namespace {

MatC hermitize(const MatC& a) { return 0.5 * (a + a.adjoint()); }

MatC project_psd(const MatC& a) {
    Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(a));
    if (es.info() != Eigen::Success) {
        throw NumericError("PSD projection eigendecomposition failed");
    }
    const VecR clipped = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * clipped.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

MatC project_trace_cap(const MatC& a, double cap) {
    const double tr = std::real(a.trace());
    if (tr <= cap) {
        return a;
    }
    const double n = static_cast<double>(a.rows());
    return a - ((tr - cap) / n) * MatC::Identity(a.rows(), a.cols());
}

MatC project_sinr_halfspace(const MatC& a, const VecC& g, double level) {
    if (g.size() == 0) {
        return a;
    }
    const double val = std::real(g.dot(a * g));
    if (val >= level) {
        return a;
    }
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) {
        return a;
    }
    return a + ((level - val) / (g2 * g2)) * (g * g.adjoint());
}

}  // namespace

MatC project_feasible(const MatC& v_cov, const SinrConstraintData& sinr, double trace_cap,
                      const VSolverOptions& opts) {
    MatC x = hermitize(v_cov);
    MatC p1 = MatC::Zero(x.rows(), x.cols());
    MatC p2 = p1;
    MatC p3 = p1;
    for (int it = 0; it < opts.dykstra_max_iterations; ++it) {
        const MatC x_prev = x;
        MatC y = x + p1;
        x = project_psd(y);
        p1 = y - x;
        y = x + p2;
        x = project_trace_cap(y, trace_cap);
        p2 = y - x;
        y = x + p3;
        x = project_sinr_halfspace(y, sinr.g, sinr.level);
        p3 = y - x;
        if ((x - x_prev).norm() <= opts.dykstra_tol * std::max(1.0, x.norm())) {
            break;
        }
    }
    return x;
}

VBound build_v_bound(const std::vector<MatC>& channels, const std::vector<MatC>& w,
                     const MatC& v_expand, const std::vector<double>& weights,
                     const std::vector<double>& noise_vars, double eta) {
    const std::size_t n_users = channels.size();
    if (w.size() != n_users || weights.size() != n_users || noise_vars.size() != n_users) {
        throw InvalidSpecError("bound inputs must have one entry per user");
    }
    VBound bound;
    bound.channels = channels;
    bound.weights = weights;
    bound.expansion = hermitize(v_expand);
    bound.eta = eta;
    bound.total_cov.resize(n_users);
    bound.taylor_coeff.resize(n_users);
    bound.logdet_expansion.resize(n_users);

    for (std::size_t k = 0; k < n_users; ++k) {
        const MatC& h = channels[k];
        const Eigen::Index n_k = h.rows();
        MatC total = noise_vars[k] * MatC::Identity(n_k, n_k);
        MatC intf = total;
        for (std::size_t u = 0; u < n_users; ++u) {
            if (w[u].size() == 0) continue;
            const MatC hw = h * w[u];
            const MatC outer = hw * hw.adjoint();
            total.noalias() += outer;
            if (u != k) {
                intf.noalias() += outer;
            }
        }
        bound.total_cov[k] = hermitize(total);
        const MatC b_k = hermitize(intf + h * bound.expansion * h.adjoint());
        Eigen::LLT<MatC> llt(b_k);
        if (llt.info() != Eigen::Success) {
            throw NumericError("interference covariance not positive definite");
        }
        bound.taylor_coeff[k] =
            hermitize(h.adjoint() * llt.solve(MatC::Identity(n_k, n_k)) * h);
        bound.logdet_expansion[k] = logdet_hpd(b_k);
    }

    Eigen::SelfAdjointEigenSolver<MatC> es(bound.expansion);
    if (es.info() != Eigen::Success) {
        throw NumericError("expansion eigendecomposition failed");
    }
    const Eigen::Index last = es.eigenvalues().size() - 1;
    bound.beta_max = es.eigenvalues()(last);
    bound.chi = es.eigenvectors().col(last);
    return bound;
}

double eval_v_bound_user(const VBound& bound, std::size_t k, const MatC& v_cov) {
    const MatC& h = bound.channels.at(k);
    const MatC full = hermitize(bound.total_cov[k] + h * v_cov * h.adjoint());
    const MatC diff = v_cov - bound.expansion;
    return logdet_hpd(full) - bound.logdet_expansion[k] -
           std::real((bound.taylor_coeff[k] * diff).trace());
}

double eval_v_penalty(const VBound& bound, const MatC& v_cov) {
    const MatC diff = v_cov - bound.expansion;
    return bound.beta_max + std::real(bound.chi.dot(diff * bound.chi)) -
           std::real(v_cov.trace());
}

double eval_v_objective(const VBound& bound, const MatC& v_cov) {
    double val = bound.eta * eval_v_penalty(bound, v_cov);
    for (std::size_t k = 0; k < bound.channels.size(); ++k) {
        val += bound.weights[k] * eval_v_bound_user(bound, k, v_cov);
    }
    return val;
}

MatC v_objective_gradient(const VBound& bound, const MatC& v_cov) {
    const Eigen::Index n = v_cov.rows();
    MatC grad = bound.eta * (bound.chi * bound.chi.adjoint() - MatC::Identity(n, n));
    for (std::size_t k = 0; k < bound.channels.size(); ++k) {
        const MatC& h = bound.channels[k];
        const MatC full = hermitize(bound.total_cov[k] + h * v_cov * h.adjoint());
        Eigen::LLT<MatC> llt(full);
        if (llt.info() != Eigen::Success) {
            throw NumericError("objective covariance not positive definite");
        }
        const MatC inv = llt.solve(MatC::Identity(h.rows(), h.rows()));
        grad.noalias() += bound.weights[k] * (h.adjoint() * inv * h - bound.taylor_coeff[k]);
    }
    return hermitize(grad);
}

VSolution solve_v_subproblem(const VBound& bound, const SinrConstraintData& sinr,
                             double trace_cap, const VSolverOptions& opts, const MatC* start) {
    if (!(trace_cap > 0.0)) {
        throw InvalidSpecError("trace cap must be positive");
    }
    const double g2 = sinr.g.size() > 0 ? sinr.g.squaredNorm() : 0.0;
    if (sinr.level > g2 * trace_cap * (1.0 + 1e-9)) {
        throw InfeasibleSubproblemError(
            "sensing threshold exceeds the best any unit-trace covariance can deliver",
            sinr.level - g2 * trace_cap);
    }

    VSolution sol;
    MatC v = project_feasible(start != nullptr ? *start : bound.expansion, sinr, trace_cap, opts);
    double f = eval_v_objective(bound, v);

    double step = 0.0;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        const MatC grad = v_objective_gradient(bound, v);
        const double gnorm = grad.norm();
        if (step <= 0.0) {
            step = 1.0 / std::max(gnorm, 1e-12);
        }
        bool accepted = false;
        MatC v_next;
        double f_next = f;
        for (int bt = 0; bt < opts.max_backtracks; ++bt) {
            v_next = project_feasible(v + step * grad, sinr, trace_cap, opts);
            f_next = eval_v_objective(bound, v_next);
            if (f_next > f) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            break;
        }
        const double residual = (v_next - v).norm() / std::max(step, 1e-300);
        v = v_next;
        f = f_next;
        step *= 2.0;
        if (residual <= opts.residual_tol * (1.0 + std::abs(f))) {
            ++it;
            break;
        }
    }

    sol.v_cov = v;
    sol.objective = f;
    sol.iterations = it;
    sol.trace_active = std::real(v.trace()) >= trace_cap * (1.0 - 1e-6);
    if (sinr.g.size() > 0) {
        const double val = std::real(sinr.g.dot(v * sinr.g));
        sol.sinr_active = val <= sinr.level * (1.0 + 1e-6);
    }
    return sol;
}

std::pair<VecC, double> extract_beamformer(const MatC& v_cov) {
    const double tr = std::real(v_cov.trace());
    if (!(tr > 0.0)) {
        throw InvalidSpecError("cannot extract a beamformer from a zero-trace covariance");
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(v_cov));
    if (es.info() != Eigen::Success) {
        throw NumericError("extraction eigendecomposition failed");
    }
    const Eigen::Index last = es.eigenvalues().size() - 1;
    VecC v = phase_normalize(es.eigenvectors().col(last));
    return {v, es.eigenvalues()(last) / tr};
}

}  // namespace nfisac
