#include "nfisac/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <thread>

namespace nfisac {

ExperimentId experiment_from_name(const std::string& name) {
    if (name == "convergence") return ExperimentId::convergence;
    if (name == "nk_sweep") return ExperimentId::nk_sweep;
    if (name == "weight_sweep") return ExperimentId::weight_sweep;
    if (name == "power_sweep") return ExperimentId::power_sweep;
    if (name == "sinr_sweep") return ExperimentId::sinr_sweep;
    throw InvalidSpecError("unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentId id) {
    switch (id) {
        case ExperimentId::convergence: return "convergence";
        case ExperimentId::nk_sweep: return "nk_sweep";
        case ExperimentId::weight_sweep: return "weight_sweep";
        case ExperimentId::power_sweep: return "power_sweep";
        case ExperimentId::sinr_sweep: return "sinr_sweep";
    }
    return "?";
}

namespace {

struct GridPoint {
    std::string param;
    double value = 0.0;
    SystemConfig cfg;
};

std::vector<GridPoint> make_grid(const ExperimentSpec& spec) {
    std::vector<GridPoint> grid;
    switch (spec.id) {
        case ExperimentId::convergence:
        case ExperimentId::nk_sweep:
            for (int nk : spec.nk_grid) {
                GridPoint gp{"nk", static_cast<double>(nk), spec.base};
                gp.cfg.n_ma.assign(static_cast<std::size_t>(gp.cfg.n_users), nk);
                grid.push_back(std::move(gp));
            }
            break;
        case ExperimentId::weight_sweep:
            if (spec.base.n_users != 2) {
                throw InvalidSpecError("weight_sweep expects a two-user configuration");
            }
            for (double w1 : spec.w1_grid) {
                GridPoint gp{"w1", w1, spec.base};
                gp.cfg.weights = {w1, 1.0 - w1};
                grid.push_back(std::move(gp));
            }
            break;
        case ExperimentId::power_sweep:
            for (double p : spec.pmax_grid) {
                GridPoint gp{"pmax_w", p, spec.base};
                gp.cfg.p_max_w = p;
                grid.push_back(std::move(gp));
            }
            break;
        case ExperimentId::sinr_sweep:
            for (double g_db : spec.gamma0_db_grid) {
                GridPoint gp{"gamma0_db", g_db, spec.base};
                gp.cfg.gamma0 = std::pow(10.0, g_db / 10.0);
                grid.push_back(std::move(gp));
            }
            break;
    }
    if (grid.empty()) {
        throw InvalidSpecError("empty sweep grid");
    }
    return grid;
}

RealizationRow run_one(const GridPoint& gp, int realization, std::uint64_t seed, bool move) {
    RealizationRow row;
    row.variant = move ? "proposed" : "fix_user_ant";
    row.grid_param = gp.param;
    row.grid_value = gp.value;
    row.realization = realization;
    row.seed = seed;
    const AoResult res = run(gp.cfg, seed, {move});
    row.status = res.status;
    row.converged = res.converged;
    row.iterations = res.iterations;
    row.wsr_nats = res.wsr;
    row.rates = res.rates;
    row.sinr = res.sinr_sdr;
    row.sensing_power = res.sensing_power;
    row.power_used = res.power_used;
    row.rank_ratio = res.rank_ratio;
    row.trace.reserve(res.trace.size());
    for (const auto& rec : res.trace) {
        row.trace.push_back(rec.wsr);
    }
    return row;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double to_db(double v) { return 10.0 * std::log10(std::max(v, 1e-300)); }

std::string status_name(RunStatus s) {
    switch (s) {
        case RunStatus::ok: return "ok";
        case RunStatus::run_failed: return "run_failed";
        case RunStatus::infeasible_init: return "infeasible_init";
    }
    return "?";
}

void write_row(std::ofstream& out, const std::string& experiment, const RealizationRow& r,
               std::size_t n_users, const std::string& status_override = {}) {
    out << experiment << ',' << r.variant << ',' << r.grid_param << ',' << fmt(r.grid_value)
        << ',' << r.realization << ',' << r.seed << ','
        << (status_override.empty() ? status_name(r.status) : status_override) << ','
        << r.iterations << ',' << fmt(r.wsr_nats) << ',' << fmt(r.wsr_nats / std::numbers::ln2);
    for (std::size_t k = 0; k < n_users; ++k) {
        out << ',' << fmt(k < r.rates.size() ? r.rates[k] : 0.0);
    }
    out << ',' << fmt(r.sinr) << ',' << fmt(to_db(r.sinr)) << ',' << fmt(r.sensing_power) << ','
        << fmt(to_db(r.sensing_power)) << ',' << fmt(r.power_used) << ',' << fmt(r.rank_ratio)
        << '\n';
}

// Mean and standard-error aggregate rows over the successful realizations.
std::vector<RealizationRow> aggregate(const std::vector<RealizationRow>& rows,
                                      std::size_t n_users) {
    std::vector<const RealizationRow*> ok;
    for (const auto& r : rows) {
        if (r.status == RunStatus::ok) ok.push_back(&r);
    }
    if (ok.empty()) return {};
    const auto n = static_cast<double>(ok.size());

    RealizationRow mean = *ok.front();
    mean.realization = -1;
    mean.seed = 0;
    mean.converged = true;
    mean.trace.clear();
    mean.rates.assign(n_users, 0.0);
    mean.wsr_nats = mean.sinr = mean.sensing_power = mean.power_used = mean.rank_ratio = 0.0;
    double iter_acc = 0.0;
    for (const auto* r : ok) {
        mean.wsr_nats += r->wsr_nats;
        for (std::size_t k = 0; k < n_users; ++k) mean.rates[k] += r->rates[k];
        mean.sinr += r->sinr;
        mean.sensing_power += r->sensing_power;
        mean.power_used += r->power_used;
        mean.rank_ratio += r->rank_ratio;
        iter_acc += r->iterations;
    }
    mean.wsr_nats /= n;
    for (auto& v : mean.rates) v /= n;
    mean.sinr /= n;
    mean.sensing_power /= n;
    mean.power_used /= n;
    mean.rank_ratio /= n;
    mean.iterations = static_cast<int>(std::lround(iter_acc / n));

    RealizationRow se = mean;
    se.realization = -2;
    se.rates.assign(n_users, 0.0);
    se.wsr_nats = se.sinr = se.sensing_power = se.power_used = se.rank_ratio = 0.0;
    se.iterations = 0;
    if (ok.size() > 1) {
        double acc = 0.0;
        std::vector<double> racc(n_users, 0.0);
        double sacc = 0.0, pacc = 0.0, uacc = 0.0, rracc = 0.0;
        for (const auto* r : ok) {
            acc += (r->wsr_nats - mean.wsr_nats) * (r->wsr_nats - mean.wsr_nats);
            for (std::size_t k = 0; k < n_users; ++k) {
                racc[k] += (r->rates[k] - mean.rates[k]) * (r->rates[k] - mean.rates[k]);
            }
            sacc += (r->sinr - mean.sinr) * (r->sinr - mean.sinr);
            pacc += (r->sensing_power - mean.sensing_power) *
                    (r->sensing_power - mean.sensing_power);
            uacc += (r->power_used - mean.power_used) * (r->power_used - mean.power_used);
            rracc += (r->rank_ratio - mean.rank_ratio) * (r->rank_ratio - mean.rank_ratio);
        }
        const double denom = n * (n - 1.0);
        se.wsr_nats = std::sqrt(acc / denom);
        for (std::size_t k = 0; k < n_users; ++k) se.rates[k] = std::sqrt(racc[k] / denom);
        se.sinr = std::sqrt(sacc / denom);
        se.sensing_power = std::sqrt(pacc / denom);
        se.power_used = std::sqrt(uacc / denom);
        se.rank_ratio = std::sqrt(rracc / denom);
    }
    return {mean, se};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.base.validate();
    if (spec.realizations < 1) {
        throw InvalidSpecError("need at least one realization");
    }
    const std::vector<GridPoint> grid = make_grid(spec);
    const auto n_users = static_cast<std::size_t>(spec.base.n_users);
    const std::string exp_name = experiment_name(spec.id);

    std::vector<std::string> variants;
    if (!spec.fix_ant_only) variants.push_back("proposed");
    variants.push_back("fix_user_ant");

    struct Task {
        const GridPoint* gp;
        int realization;
        bool move;
    };
    std::vector<Task> tasks;
    for (const auto& gp : grid) {
        for (const auto& var : variants) {
            for (int r = 0; r < spec.realizations; ++r) {
                tasks.push_back({&gp, r, var == "proposed"});
            }
        }
    }

    std::vector<RealizationRow> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) break;
                const Task& task = tasks[i];
                results[i] = run_one(*task.gp, task.realization,
                                     spec.master_seed + static_cast<std::uint64_t>(task.realization),
                                     task.move);
            }
        });
    }
    for (auto& th : pool) th.join();

    ExperimentResult out;
    out.total = static_cast<int>(results.size());

    std::ofstream csv(spec.output_path);
    if (!csv) {
        throw Error("cannot open output file: " + spec.output_path);
    }
    csv << "experiment,variant,grid_param,grid_value,realization,seed,status,iterations,"
           "wsr_nats,wsr_bits";
    for (std::size_t k = 1; k <= n_users; ++k) csv << ",r_" << k;
    csv << ",sinr_s,sinr_s_db,ps,ps_db,power_used,rank_ratio\n";

    std::ofstream trace_csv;
    if (spec.id == ExperimentId::convergence) {
        std::string trace_path = spec.output_path;
        const auto dot = trace_path.rfind('.');
        trace_path = (dot == std::string::npos ? trace_path : trace_path.substr(0, dot)) +
                     "_trace.csv";
        trace_csv.open(trace_path);
        if (!trace_csv) {
            throw Error("cannot open output file: " + trace_path);
        }
        trace_csv << "experiment,variant,grid_param,grid_value,realization,seed,iteration,"
                     "wsr_nats\n";
    }

    std::size_t idx = 0;
    for (const auto& gp : grid) {
        for (const auto& var : variants) {
            std::vector<RealizationRow> batch(results.begin() + static_cast<std::ptrdiff_t>(idx),
                                              results.begin() +
                                                  static_cast<std::ptrdiff_t>(idx) +
                                                  spec.realizations);
            idx += static_cast<std::size_t>(spec.realizations);
            for (const auto& row : batch) {
                write_row(csv, exp_name, row, n_users);
                if (row.status != RunStatus::ok) ++out.failed;
            }
            const auto aggr = aggregate(batch, n_users);
            for (std::size_t a = 0; a < aggr.size(); ++a) {
                write_row(csv, exp_name, aggr[a], n_users, a == 0 ? "mean" : "stderr");
            }

            if (trace_csv.is_open()) {
                // Converged traces are padded with their final value so that
                // per-iteration averages stay well defined.
                std::size_t max_len = 0;
                for (const auto& row : batch) {
                    if (row.status == RunStatus::ok) max_len = std::max(max_len, row.trace.size());
                }
                for (const auto& row : batch) {
                    if (row.status != RunStatus::ok) continue;
                    for (std::size_t i = 0; i < row.trace.size(); ++i) {
                        trace_csv << exp_name << ',' << row.variant << ',' << row.grid_param
                                  << ',' << fmt(row.grid_value) << ',' << row.realization << ','
                                  << row.seed << ',' << i << ',' << fmt(row.trace[i]) << '\n';
                    }
                }
                for (std::size_t i = 0; i < max_len; ++i) {
                    double acc = 0.0;
                    int cnt = 0;
                    for (const auto& row : batch) {
                        if (row.status != RunStatus::ok || row.trace.empty()) continue;
                        acc += i < row.trace.size() ? row.trace[i] : row.trace.back();
                        ++cnt;
                    }
                    if (cnt > 0) {
                        trace_csv << exp_name << ',' << var << ',' << gp.param << ','
                                  << fmt(gp.value) << ",-1,0," << i << ',' << fmt(acc / cnt)
                                  << '\n';
                    }
                }
            }

            out.rows.insert(out.rows.end(), batch.begin(), batch.end());
            out.rows.insert(out.rows.end(), aggr.begin(), aggr.end());
        }
    }
    return out;
}

}  // namespace nfisac
