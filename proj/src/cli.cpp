#include "nfisac/cli.hpp"

#include <CLI11.hpp>
#include <iostream>

#include "nfisac/experiment.hpp"

namespace nfisac::cli {

int run_main(const std::vector<std::string>& args) {
    CLI::App app{"Near-field ISAC weighted-sum-rate optimizer"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run a Monte-Carlo experiment and write CSV");
    std::string config_path;
    std::string experiment = "convergence";
    std::string out_path;
    std::uint64_t seed = 1;
    int realizations = -1;
    bool no_ma = false;
    run_cmd->add_option("--config", config_path, "Path to the key = value configuration file");
    run_cmd->add_option("--experiment", experiment,
                        "convergence | nk_sweep | weight_sweep | power_sweep | sinr_sweep")
        ->required();
    run_cmd->add_option("--out", out_path, "Output CSV path")->required();
    run_cmd->add_option("--seed", seed, "Master seed (realization i uses seed + i)");
    run_cmd->add_option("--realizations", realizations, "Realizations per grid point");
    run_cmd->add_flag("--no-ma", no_ma, "Fixed-antenna benchmark only");

    // CLI11 consumes argv-style arrays in reverse.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        ExperimentSpec spec;
        spec.id = experiment_from_name(experiment);
        if (!config_path.empty()) {
            spec.base = parse_config_file(config_path);
        }
        spec.master_seed = seed;
        if (realizations > 0) {
            spec.realizations = realizations;
        }
        spec.fix_ant_only = no_ma;
        spec.output_path = out_path;

        const ExperimentResult res = run_experiment(spec);
        std::cerr << "wrote " << out_path << " (" << res.total << " runs, " << res.failed
                  << " failed)\n";
        if (res.failed == res.total) {
            return 3;
        }
        return 0;
    } catch (const ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidSpecError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace nfisac::cli
