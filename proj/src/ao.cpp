#include "nfisac/ao.hpp"

#include <cmath>

#include "nfisac/combiner.hpp"
#include "nfisac/ma_position.hpp"
#include "nfisac/metrics.hpp"
#include "nfisac/precoder_sca.hpp"
#include "nfisac/sensing_beamformer.hpp"

namespace nfisac {

namespace {

std::vector<MatC> channel_matrices(const ChannelSet& ch) {
    std::vector<MatC> h;
    h.reserve(ch.users.size());
    for (const auto& uc : ch.users) {
        h.push_back(uc.matrix);
    }
    return h;
}

std::vector<double> noise_vars(const SystemConfig& cfg) {
    std::vector<double> out(static_cast<std::size_t>(cfg.n_users));
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = cfg.noise_user_var(k);
    }
    return out;
}

std::vector<double> user_rates(const SystemConfig& cfg, const std::vector<MatC>& h,
                               const std::vector<MatC>& w, const MatC& v_cov) {
    std::vector<double> rates(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        rates[k] = user_rate_sdr(h[k], w, k, v_cov, cfg.noise_user_var(k));
    }
    return rates;
}

double total_power(const std::vector<MatC>& w) {
    double p = 0.0;
    for (const auto& wk : w) {
        p += wk.squaredNorm();
    }
    return p;
}

}  // namespace

ChannelSet build_channels(const SystemConfig& cfg, const AntennaLayout& layout,
                          const std::vector<std::vector<Point3>>& q) {
    ChannelSet ch;
    const double lambda = cfg.wavelength();
    ch.users.reserve(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double d = distance(cfg.bs_tx_center, cfg.user_centers[k]);
        const double amp = std::sqrt(user_path_loss(lambda, d));
        ch.users.push_back(build_user_channel(layout.tx, q[k], lambda, amp));
    }
    const double r_t = distance(cfg.bs_tx_center, cfg.target);
    const double r_r = distance(cfg.bs_rx_center, cfg.target);
    const double amp_s = std::sqrt(sensing_path_loss(lambda, r_t, r_r));
    ch.sensing = build_sensing_channel(layout.tx, layout.rx, cfg.target, lambda, amp_s);
    return ch;
}

std::pair<DesignState, ChannelSet> initialize(const SystemConfig& cfg,
                                              const AntennaLayout& layout, std::uint64_t seed) {
    cfg.validate();
    DesignState st;
    const auto n_users = static_cast<std::size_t>(cfg.n_users);

    st.q.resize(n_users);
    for (std::size_t k = 0; k < n_users; ++k) {
        st.q[k] = sample_initial_positions(layout.regions[k], seed + 0x9e3779b9ull * (k + 1));
    }
    ChannelSet ch = build_channels(cfg, layout, st.q);

    // Matched-filter sensing covariance: rank one, unit trace.
    st.v_cov = (ch.sensing.tx_response * ch.sensing.tx_response.adjoint()) /
               static_cast<double>(cfg.n_tx);

    // Per-user right-singular precoders sharing the budget equally.
    std::vector<MatC> w_base(n_users);
    for (std::size_t k = 0; k < n_users; ++k) {
        const MatC& h = ch.users[k].matrix;
        Eigen::JacobiSVD<MatC> svd(h, Eigen::ComputeThinV);
        const Eigen::Index n_k = h.rows();
        const double scale = std::sqrt(cfg.p_max_w / (static_cast<double>(cfg.n_users) *
                                                      static_cast<double>(n_k)));
        w_base[k] = scale * svd.matrixV().leftCols(n_k);
    }

    const double sigma_z2 = cfg.noise_sense_var();
    const auto sinr_at_scale = [&](double beta) {
        std::vector<MatC> w(n_users);
        for (std::size_t k = 0; k < n_users; ++k) {
            w[k] = std::sqrt(beta) * w_base[k];
        }
        const VecC u = optimal_combiner(ch.sensing.matrix, w, ch.sensing.rx_response, sigma_z2);
        return sensing_sinr_sdr(u, ch.sensing.matrix, w, st.v_cov, sigma_z2).sinr;
    };

    double beta = 1.0;
    if (cfg.gamma0 > 0.0 && sinr_at_scale(1.0) < cfg.gamma0) {
        constexpr double kBetaFloor = 1e-12;
        const double max_sinr = sinr_at_scale(kBetaFloor);
        if (max_sinr < cfg.gamma0) {
            throw InfeasibleConfigError(
                "sensing threshold unreachable even with a vanishing precoder", max_sinr);
        }
        double lo = kBetaFloor;
        double hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (sinr_at_scale(mid) >= cfg.gamma0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        beta = lo;  // feasible side
    }

    st.w.resize(n_users);
    for (std::size_t k = 0; k < n_users; ++k) {
        st.w[k] = std::sqrt(beta) * w_base[k];
    }
    st.u = optimal_combiner(ch.sensing.matrix, st.w, ch.sensing.rx_response, sigma_z2);
    return {std::move(st), std::move(ch)};
}

AoResult run(const SystemConfig& cfg, std::uint64_t seed, const RunOptions& opts) {
    AoResult res;
    const AntennaLayout layout = cfg.layout();
    ChannelSet ch;
    DesignState st;
    try {
        std::tie(st, ch) = initialize(cfg, layout, seed);
    } catch (const InfeasibleConfigError& e) {
        res.status = RunStatus::infeasible_init;
        res.message = e.what();
        return res;
    }

    const auto n_users = static_cast<std::size_t>(cfg.n_users);
    const std::vector<double> noise = noise_vars(cfg);
    const double sigma_z2 = cfg.noise_sense_var();
    const double lambda = cfg.wavelength();
    const SolverOptions& so = cfg.solver;

    DualOptions dual_opts;
    dual_opts.max_outer = so.dual_max_iterations;
    dual_opts.rel_tol = so.dual_rel_tol;
    VSolverOptions v_opts;
    v_opts.max_iterations = so.v_solver_max_iterations;
    v_opts.residual_tol = so.v_solver_residual_tol;
    v_opts.dykstra_tol = so.dykstra_tol;

    std::vector<MatC> h = channel_matrices(ch);

    const auto record = [&](int iteration, const std::vector<double>& steps) {
        IterationRecord rec;
        rec.iteration = iteration;
        rec.rates = user_rates(cfg, h, st.w, st.v_cov);
        rec.wsr = wsr(cfg.weights, rec.rates);
        const auto se = sensing_sinr_sdr(st.u, ch.sensing.matrix, st.w, st.v_cov, sigma_z2);
        rec.sinr = se.sinr;
        rec.sensing_power = se.power;
        rec.power_used = total_power(st.w);
        rec.pgm_steps = steps;
        res.trace.push_back(std::move(rec));
    };

    std::vector<double> pgm_state(n_users, cfg.pgm.initial_step);
    record(0, {});
    double wsr_prev = res.trace.front().wsr;
    const double exit_gain = so.block_exit_factor * so.wsr_rel_tol;

    const auto current_wsr = [&]() {
        return wsr(cfg.weights, user_rates(cfg, h, st.w, st.v_cov));
    };

    int iter = 0;
    for (; iter < so.max_iterations; ++iter) {
        // Combiner, closed form. Leaves the WSR untouched.
        st.u = optimal_combiner(ch.sensing.matrix, st.w, ch.sensing.rx_response, sigma_z2);
        VecC g = ch.sensing.matrix.adjoint() * st.u;

        bool v_step_done = false;
        const auto run_v_step = [&]() {
            double cur = current_wsr();
            for (int j = 0; j < so.v_max_inner; ++j) {
                const VBound vb = build_v_bound(h, st.w, st.v_cov, cfg.weights, noise, cfg.eta);
                SinrConstraintData vc;
                vc.g = g;
                double quad = sigma_z2 * st.u.squaredNorm();
                for (const auto& wk : st.w) {
                    quad += (wk.adjoint() * g).squaredNorm();
                }
                vc.level = cfg.gamma0 * quad;
                const VSolution sol = solve_v_subproblem(vb, vc, 1.0, v_opts);
                st.v_cov = sol.v_cov;
                const double next = current_wsr();
                if (next - cur < exit_gain * std::max(1.0, std::abs(next))) {
                    break;
                }
                cur = next;
            }
        };

        // Precoder block: refresh the concave bound until it stops paying.
        try {
            double cur = current_wsr();
            for (int j = 0; j < so.sca_max_inner; ++j) {
                const ScaBound bound = build_bound(h, st.w, cfg.weights, st.v_cov, noise);
                SinrConstraintData pc;
                pc.g = g;
                pc.level = std::real(g.dot(st.v_cov * g)) - cfg.gamma0 * sigma_z2 *
                                                                st.u.squaredNorm();
                PrecoderSolution sol;
                try {
                    sol = solve_precoder_subproblem(bound, pc, cfg.p_max_w, cfg.gamma0, dual_opts);
                } catch (const InfeasibleSubproblemError&) {
                    if (v_step_done) throw;
                    // One retry after re-running the beamformer step.
                    run_v_step();
                    v_step_done = true;
                    pc.level = std::real(g.dot(st.v_cov * g)) - cfg.gamma0 * sigma_z2 *
                                                                    st.u.squaredNorm();
                    sol = solve_precoder_subproblem(bound, pc, cfg.p_max_w, cfg.gamma0, dual_opts);
                }
                st.w = sol.w;
                const double next = current_wsr();
                if (next - cur < exit_gain * std::max(1.0, std::abs(next))) {
                    break;
                }
                cur = next;
            }

            // Sensing beamformer block.
            if (!v_step_done) {
                run_v_step();
            }
        } catch (const InfeasibleSubproblemError& e) {
            res.status = RunStatus::run_failed;
            res.message = e.what();
            break;
        }

        // Per-user projected-gradient walks; each accepted step satisfies the
        // sufficient-increase test and the spacing constraint.
        std::vector<double> steps(n_users, 0.0);
        if (opts.move_antennas) {
            for (std::size_t k = 0; k < n_users; ++k) {
                if (so.pgm_reset_step) {
                    pgm_state[k] = cfg.pgm.initial_step;
                }
                const double amp = ch.users[k].amplitude;
                const RateFn rate_fn = [&](const std::vector<Point3>& qq) {
                    const MatC hk = build_user_channel(layout.tx, qq, lambda, amp).matrix;
                    return user_rate_sdr(hk, st.w, k, st.v_cov, noise[k]);
                };
                double rate_prev = rate_fn(st.q[k]);
                for (int j = 0; j < so.pgm_max_inner; ++j) {
                    const VecR grad = rate_gradient(st.q[k], layout.tx, lambda, amp, st.w, k,
                                                    st.v_cov, noise[k]);
                    const PgmStepResult stp = pgm_step(st.q[k], grad, pgm_state[k], cfg.pgm,
                                                       layout.regions[k], cfg.d_min_m, rate_fn);
                    pgm_state[k] = stp.step_next;
                    if (!stp.accepted) {
                        break;
                    }
                    st.q[k] = stp.q;
                    steps[k] = stp.step_used;
                    const double gain = stp.rate_after - rate_prev;
                    rate_prev = stp.rate_after;
                    if (gain < exit_gain * std::max(1.0, std::abs(stp.rate_after))) {
                        break;
                    }
                }
                ch.users[k] = build_user_channel(layout.tx, st.q[k], lambda, amp);
                h[k] = ch.users[k].matrix;
            }
        }

        record(iter + 1, steps);
        const double wsr_now = res.trace.back().wsr;
        if (std::abs(wsr_now - wsr_prev) < so.wsr_rel_tol * std::max(1.0, std::abs(wsr_prev))) {
            res.converged = true;
            wsr_prev = wsr_now;
            ++iter;
            break;
        }
        wsr_prev = wsr_now;
    }

    res.iterations = iter;
    res.state = st;
    res.rates = user_rates(cfg, h, st.w, st.v_cov);
    res.wsr = wsr(cfg.weights, res.rates);
    const auto se = sensing_sinr_sdr(st.u, ch.sensing.matrix, st.w, st.v_cov, sigma_z2);
    res.sinr_sdr = se.sinr;
    res.sensing_power = se.power;
    res.power_used = total_power(st.w);

    const double tr_v = std::real(st.v_cov.trace());
    if (tr_v > 1e-15) {
        auto [v, ratio] = extract_beamformer(st.v_cov);
        res.v = v;
        res.rank_ratio = ratio;
        res.sinr_extracted =
            sensing_sinr(st.u, ch.sensing.matrix, st.w, v, sigma_z2).sinr;
    } else {
        // Sensing beam effectively off (gamma0 = 0 drives V to zero).
        res.v = VecC::Zero(st.v_cov.rows());
        res.rank_ratio = 1.0;
        res.sinr_extracted = 0.0;
    }
    res.channels = std::move(ch);
    return res;
}

}  // namespace nfisac
