#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bb84/bounds.hpp"
#include "bb84/protocol.hpp"

namespace bb84 {

// Trial sweep of the protocol, with a per-trial CSV and a summary block.
struct RunSummary {
    std::size_t trials = 0;
    std::size_t aborts = 0;
    double abort_rate = 0.0;
    double abort_rate_se = 0.0;
    double mean_error_rate_info = 0.0;
    double mean_error_rate_test_z = 0.0;
    double mean_error_rate_test_x = 0.0;
    double key_agreement_rate = 0.0;  // among passing trials
    double key_agreement_se = 0.0;
    std::size_t failures_while_passing = 0;  // keys differ and test passed
};

struct RunResult {
    std::string csv;  // header + one row per trial
    RunSummary summary;
};

RunResult run_trials(const ProtocolConfig& cfg, const CollectiveAttackSpec& attack,
                     std::size_t trials);

// One row of the trace-distance verification sweep.
struct VerifyRow {
    std::string attack;
    std::size_t n = 0, r = 0, m = 0;
    std::size_t d_rm = 0;
    double q_x = 0.0;
    std::string xi, key_a, key_b;
    bool skipped = false;  // instance exceeded the exhaustive cap
    double distance = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - distance
};

struct VerifySweepSpec {
    std::uint64_t seed = 2024;
    std::size_t min_n = 2;
    std::size_t max_n = 8;
    bool include_probe_dim4 = true;
};

// Exhaustive Theorem-style check: for every (attack, code, xi, k, k') in
// the sweep, the exact trace distance between Eve's conditioned states is
// compared against theorem1_rhs.  Instances over the cap appear as
// `skipped` rows, never silently.
std::vector<VerifyRow> verify_distance_sweep(const VerifySweepSpec& spec);

std::string verify_csv(const std::vector<VerifyRow>& rows);
// Most negative margin over non-skipped rows (0 if none).
double worst_margin(const std::vector<VerifyRow>& rows);

// Figure-style threshold curve CSV: header "p_ax,p_az", 10 significant
// digits per value; unsolvable grid points are reported as "none".
std::string curve_csv(double grid_start, double grid_end, double grid_step);

// Hoeffding empirical-vs-bound comparison CSV.
std::string hoeffding_csv(std::size_t n, std::size_t n_x,
                          const std::vector<std::size_t>& population_weights,
                          const std::vector<double>& eps_grid, std::size_t trials,
                          std::uint64_t seed);

// Bound report CSV: one row per parameter tuple.
std::string bounds_csv(const std::vector<BoundParams>& params);

} // namespace bb84
