#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evsim/config.hpp"
#include "evsim/error.hpp"
#include "evsim/report.hpp"
#include "evsim/simulator.hpp"

namespace fs = std::filesystem;
using namespace evsim;

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("EVSIM_OUT_DIR")) return env;
    return ".";
}

struct RunArtifacts {
    fs::path report;
    fs::path cancellations;
    fs::path charging;
};

RunArtifacts artifact_paths(const fs::path& out_dir, Strategy strategy, std::uint64_t seed) {
    const std::string stem = std::string("report_") + to_string(strategy) + "_seed" +
                             std::to_string(seed);
    return {out_dir / (stem + ".json"), out_dir / (stem + "_cancellations.csv"),
            out_dir / (stem + "_charging.csv")};
}

int run_one_seed(const ScenarioConfig& base, std::uint64_t seed, const fs::path& out_dir) {
    ScenarioConfig config = base;
    config.sim.seed = seed;
    Simulation sim(config);
    const RunReport report = sim.run();

    const auto paths = artifact_paths(out_dir, config.sim.strategy, seed);
    report.write_json_file(paths.report.string());
    std::ofstream cancellations(paths.cancellations, std::ios::binary);
    report.write_cancellation_csv(cancellations);
    std::ofstream charging(paths.charging, std::ios::binary);
    report.write_charging_csv(charging);

    std::cout << "seed " << seed << ": served " << report.passengers.served << "/"
              << report.passengers.requests << ", monetary profit $"
              << report.profit.monetary_usd << " -> " << paths.report.string() << "\n";
    return 0;
}

int cmd_run(const std::string& config_path, std::vector<std::uint64_t> seeds,
            const std::string& strategy_name, const std::string& out_dir_arg,
            bool parallel) {
    ScenarioConfig config = ScenarioConfig::load_file(config_path);
    if (!strategy_name.empty()) config.sim.strategy = strategy_from_string(strategy_name);
    if (seeds.empty()) seeds.push_back(config.sim.seed);

    const fs::path out_dir = out_dir_arg.empty() ? default_out_dir() : out_dir_arg;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    {
        std::ofstream touch(out_dir / ".evsim_write_test");
        if (!touch) throw ConfigError("output directory is not writable: " + out_dir.string());
    }
    fs::remove(out_dir / ".evsim_write_test", ec);

    if (!parallel || seeds.size() == 1) {
        for (std::uint64_t seed : seeds) run_one_seed(config, seed, out_dir);
        return 0;
    }

    std::vector<pid_t> children;
    for (std::uint64_t seed : seeds) {
        const pid_t pid = fork();
        if (pid < 0) throw Error("fork failed");
        if (pid == 0) {
            try {
                run_one_seed(config, seed, out_dir);
                _exit(0);
            } catch (const std::exception& e) {
                std::cerr << "seed " << seed << " failed: " << e.what() << "\n";
                _exit(1);
            }
        }
        children.push_back(pid);
    }
    int status = 0;
    bool failed = false;
    for (pid_t pid : children) {
        waitpid(pid, &status, 0);
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) failed = true;
    }
    return failed ? 1 : 0;
}

void print_row(const std::string& name, const std::vector<double>& values, bool delta) {
    std::cout << name;
    for (double v : values) std::cout << '\t' << v;
    if (delta && values.size() == 2) std::cout << '\t' << values[1] - values[0];
    std::cout << '\n';
}

int cmd_compare(const std::vector<std::string>& report_paths) {
    if (report_paths.size() < 2) throw ConfigError("compare needs at least two reports");
    std::vector<RunReport> reports;
    for (const auto& p : report_paths) reports.push_back(RunReport::load_json_file(p));
    for (std::size_t i = 1; i < reports.size(); ++i)
        if (reports[i].scenario.horizon_s != reports[0].scenario.horizon_s)
            throw ConfigError("reports have mismatched horizons");

    std::cout << "metric";
    for (const auto& r : reports) std::cout << '\t' << r.scenario.strategy << "/seed"
                                            << r.scenario.seed;
    if (reports.size() == 2) std::cout << "\tdelta";
    std::cout << '\n';

    auto row = [&](const std::string& name, auto getter) {
        std::vector<double> values;
        for (const auto& r : reports) values.push_back(static_cast<double>(getter(r)));
        print_row(name, values, true);
    };
    row("mean_driver_income_usd", [](const RunReport& r) { return r.drivers.mean_income_usd; });
    row("mean_shift_length_h", [](const RunReport& r) { return r.drivers.mean_shift_length_h; });
    row("mean_initial_soc_kwh", [](const RunReport& r) { return r.drivers.mean_initial_soc_kwh; });
    row("mean_final_soc_kwh", [](const RunReport& r) { return r.drivers.mean_final_soc_kwh; });
    row("served", [](const RunReport& r) { return r.passengers.served; });
    row("served_pct", [](const RunReport& r) { return r.passengers.served_pct; });
    row("cancellations", [](const RunReport& r) {
        return r.passengers.cancelled_type1 + r.passengers.cancelled_type2;
    });
    row("cancelled_type1", [](const RunReport& r) { return r.passengers.cancelled_type1; });
    row("cancelled_type2", [](const RunReport& r) { return r.passengers.cancelled_type2; });
    row("mean_matching_time_s", [](const RunReport& r) { return r.passengers.mean_matching_time_s; });
    row("mean_pickup_time_s", [](const RunReport& r) { return r.passengers.mean_pickup_time_s; });
    row("chargings", [](const RunReport& r) { return r.charging.sessions; });
    row("chargings_off_peak", [](const RunReport& r) { return r.charging.sessions_off_peak; });
    row("chargings_peak", [](const RunReport& r) { return r.charging.sessions_peak; });
    row("charging_profit_usd", [](const RunReport& r) { return r.charging.profit_usd; });
    row("charging_profit_off_peak_usd",
        [](const RunReport& r) { return r.charging.profit_off_peak_usd; });
    row("charging_profit_peak_usd",
        [](const RunReport& r) { return r.charging.profit_peak_usd; });
    row("trip_profit_usd", [](const RunReport& r) { return r.profit.trip_usd; });
    row("monetary_profit_usd", [](const RunReport& r) { return r.profit.monetary_usd; });
    return 0;
}

int cmd_gen_demand(const std::string& network_file, int grid_rows, int grid_cols,
                   double grid_edge_s, double rate, const std::string& rates_file,
                   double horizon_s, const std::string& od_file, std::uint64_t seed,
                   const std::string& out_file) {
    Network net = network_file.empty() ? Network::grid(grid_rows, grid_cols, grid_edge_s)
                                       : Network::load_file(network_file);

    std::vector<double> hourly(24, rate);
    if (!rates_file.empty()) {
        std::ifstream in(rates_file);
        if (!in) throw ConfigError("cannot open rates file: " + rates_file);
        hourly.clear();
        double r;
        while (in >> r) hourly.push_back(r);
        if (hourly.size() != 24) throw ConfigError("rates file must list 24 hourly rates");
    }

    std::vector<OdWeight> od;
    if (!od_file.empty()) od = load_od_weights_file(od_file);

    EntityRng rng(seed, rng_domain::demand_gen, 0);
    const auto requests = generate_demand(rng, net, hourly, horizon_s, od);

    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw ConfigError("cannot write demand file: " + out_file);
    write_demand_csv(out, requests);
    std::cout << "wrote " << requests.size() << " requests to " << out_file << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    const ScenarioConfig config = ScenarioConfig::load_file(config_path);
    const Network net = config.build_network();
    const auto demand = config.load_demand();
    const auto chargers = config.build_chargers(net);
    std::cout << "config OK: " << net.node_count() << " nodes, " << net.edge_count()
              << " edges, " << demand.size() << " requests, " << chargers.size()
              << " chargers, strategy " << to_string(config.sim.strategy) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Electrified e-hailing market simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the simulation for one or more seeds");
    std::string run_config, run_strategy, run_out;
    std::vector<std::uint64_t> run_seeds;
    bool run_parallel = false;
    run->add_option("--config", run_config, "Scenario config file")->required();
    run->add_option("--seed", run_seeds, "Seed(s); defaults to the config seed");
    run->add_option("--strategy", run_strategy,
                    "proposed | benchmark_no_incentive | benchmark_free_charging");
    run->add_option("--out", run_out, "Output directory (default $EVSIM_OUT_DIR or .)");
    run->add_flag("--parallel", run_parallel, "One process per seed");

    auto* compare = app.add_subcommand("compare", "Tabulate two or more run reports");
    std::vector<std::string> compare_reports;
    compare->add_option("reports", compare_reports, "Report JSON files")->expected(-1);

    auto* gen = app.add_subcommand("gen-demand", "Generate a Poisson demand CSV");
    std::string gen_network, gen_rates_file, gen_od_file, gen_out = "demand.csv";
    int gen_rows = 0, gen_cols = 0;
    double gen_edge_s = 30, gen_rate = 0, gen_horizon = 86400;
    std::uint64_t gen_seed = 1;
    gen->add_option("--network", gen_network, "Network file");
    gen->add_option("--grid-rows", gen_rows, "Grid rows (with --grid-cols)");
    gen->add_option("--grid-cols", gen_cols, "Grid cols");
    gen->add_option("--grid-edge-time", gen_edge_s, "Grid edge travel time, s");
    gen->add_option("--rate", gen_rate, "Constant arrival rate, requests/s");
    gen->add_option("--hourly-rates", gen_rates_file, "File with 24 hourly rates, requests/s");
    gen->add_option("--horizon", gen_horizon, "Horizon, s")->required();
    gen->add_option("--od-weights", gen_od_file, "CSV origin,dest,weight");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--out", gen_out, "Output CSV path");

    auto* validate = app.add_subcommand("validate", "Validate a scenario config end to end");
    std::string validate_config;
    validate->add_option("--config", validate_config, "Scenario config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_config, run_seeds, run_strategy, run_out, run_parallel);
        if (compare->parsed()) return cmd_compare(compare_reports);
        if (gen->parsed()) {
            if (gen_network.empty() && (gen_rows < 2 || gen_cols < 2))
                throw ConfigError("gen-demand needs --network or --grid-rows/--grid-cols");
            return cmd_gen_demand(gen_network, gen_rows, gen_cols, gen_edge_s, gen_rate,
                                  gen_rates_file, gen_horizon, gen_od_file, gen_seed, gen_out);
        }
        if (validate->parsed()) return cmd_validate(validate_config);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
