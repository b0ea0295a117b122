// Command-line front end: protocol trial sweeps, trace-distance
// verification, Hoeffding checks, bound reports, and threshold-curve
// emission.  All outputs are CSV and byte-deterministic under a fixed seed.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "bb84/experiments.hpp"

namespace {

constexpr const char* kVersion = "bb84z 1.0.0";

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BB84-INFO-z protocol simulator and bound verifier"};
    app.set_version_flag("--version", std::string(kVersion) + " (PRNG: " +
                                          bb84::PhiloxRng::kAlgorithmName + ")");
    app.require_subcommand(1);

    std::string config_path, out_path, attack_id;
    std::uint64_t seed = 0;
    bool seed_set = false, trials_set = false;
    std::size_t trials = 0;

    auto* run = app.add_subcommand("run", "execute protocol trials from a config file");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--out", out_path, "trial CSV output path ('-' for stdout)");
    run->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--trials", trials, "override the config trial count")
        ->each([&](const std::string&) { trials_set = true; });
    run->add_option("--attack", attack_id, "override the config attack (built-in id or file)");

    double grid_start = 0.0, grid_end = 0.245, grid_step = 0.005;
    auto* curve = app.add_subcommand("curve", "emit the asymptotic threshold curve");
    curve->add_option("--grid-start", grid_start, "first p_ax value");
    curve->add_option("--grid-end", grid_end, "last p_ax value");
    curve->add_option("--grid-step", grid_step, "p_ax grid step");
    curve->add_option("--out", out_path, "curve CSV output path");

    std::uint64_t verify_seed = 2024;
    std::size_t verify_min_n = 2, verify_max_n = 8;
    auto* verify = app.add_subcommand(
        "verify-distance", "exact trace distances vs the security bound on small instances");
    verify->add_option("--seed", verify_seed, "seed for the random codes");
    verify->add_option("--min-n", verify_min_n, "smallest INFO length");
    verify->add_option("--max-n", verify_max_n, "largest INFO length");
    verify->add_option("--out", out_path, "verification CSV output path");

    std::size_t hoeff_n = 100, hoeff_nx = 100, hoeff_trials = 100000;
    std::vector<std::size_t> hoeff_weights = {10, 20, 50};
    std::vector<double> hoeff_eps = {0.05, 0.1, 0.15, 0.2};
    std::uint64_t hoeff_seed = 7;
    auto* hoeff = app.add_subcommand("hoeffding",
                                     "empirical sampling tails vs the Hoeffding bound");
    hoeff->add_option("--n", hoeff_n, "sample size");
    hoeff->add_option("--nx", hoeff_nx, "remaining population size");
    hoeff->add_option("--weight", hoeff_weights, "population weights to test");
    hoeff->add_option("--eps", hoeff_eps, "epsilon grid");
    hoeff->add_option("--trials", hoeff_trials, "Monte-Carlo draws per population");
    hoeff->add_option("--seed", hoeff_seed, "RNG seed");
    hoeff->add_option("--out", out_path, "report CSV output path");

    bb84::BoundParams bp;
    bp.n = 10000;
    bp.n_z = 10000;
    bp.n_x = 10000;
    bp.r = 1000;
    bp.m = 1000;
    bp.p_az = 0.05;
    bp.p_ax = 0.05;
    bp.eps_sec = 0.1;
    bp.eps_rel = 0.1;
    auto* bounds = app.add_subcommand("bounds", "evaluate the closed-form bound formulas");
    bounds->add_option("--n", bp.n, "INFO bit count");
    bounds->add_option("--nz", bp.n_z, "TEST-Z bit count");
    bounds->add_option("--nx", bp.n_x, "TEST-X bit count");
    bounds->add_option("--r", bp.r, "syndrome length");
    bounds->add_option("--m", bp.m, "key length");
    bounds->add_option("--p-az", bp.p_az, "z-basis threshold");
    bounds->add_option("--p-ax", bp.p_ax, "x-basis threshold");
    bounds->add_option("--eps-sec", bp.eps_sec, "security slack");
    bounds->add_option("--eps-rel", bp.eps_rel, "reliability slack");
    bounds->add_option("--out", out_path, "report CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            bb84::ExperimentConfig cfg = bb84::load_experiment_config(config_path);
            if (seed_set) cfg.protocol.seed = seed;
            if (trials_set) cfg.trials = trials;
            if (!attack_id.empty()) {
                try {
                    cfg.attack = bb84::CollectiveAttackSpec::builtin(attack_id);
                } catch (const std::invalid_argument&) {
                    cfg.attack = bb84::CollectiveAttackSpec::load(attack_id);
                }
            }
            const bb84::RunResult result = bb84::run_trials(cfg.protocol, cfg.attack, cfg.trials);
            write_output(out_path, result.csv);
            const auto& s = result.summary;
            std::cerr << std::setprecision(6) << "trials " << s.trials << "\n"
                      << "abort_rate " << s.abort_rate << " (se " << s.abort_rate_se << ")\n"
                      << "mean_error_rate_info " << s.mean_error_rate_info << "\n"
                      << "mean_error_rate_test_z " << s.mean_error_rate_test_z << "\n"
                      << "mean_error_rate_test_x " << s.mean_error_rate_test_x << "\n"
                      << "key_agreement_rate " << s.key_agreement_rate << " (se "
                      << s.key_agreement_se << ")\n";
        } else if (curve->parsed()) {
            write_output(out_path, bb84::curve_csv(grid_start, grid_end, grid_step));
        } else if (verify->parsed()) {
            bb84::VerifySweepSpec spec;
            spec.seed = verify_seed;
            spec.min_n = verify_min_n;
            spec.max_n = verify_max_n;
            const auto rows = bb84::verify_distance_sweep(spec);
            write_output(out_path, bb84::verify_csv(rows));
            const double worst = bb84::worst_margin(rows);
            std::cerr << "rows " << rows.size() << ", worst margin " << worst << "\n";
            if (worst < -1e-9) {
                std::cerr << "verification FAILED: a distance exceeds its bound\n";
                return 1;
            }
        } else if (hoeff->parsed()) {
            write_output(out_path, bb84::hoeffding_csv(hoeff_n, hoeff_nx, hoeff_weights,
                                                       hoeff_eps, hoeff_trials, hoeff_seed));
        } else if (bounds->parsed()) {
            write_output(out_path, bb84::bounds_csv({bp}));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
