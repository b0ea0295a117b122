#include "bb84/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "bb84/quantum.hpp"

namespace bb84 {

namespace {

double binomial_se(double p, std::size_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

BitString bits_from_index(std::uint64_t value, std::size_t length) {
    BitString s(length);
    for (std::size_t j = 0; j < length; ++j) s.set_bit(j, static_cast<int>((value >> j) & 1));
    return s;
}

std::ostream& fmt(std::ostream& os) {
    os << std::setprecision(10);
    return os;
}

} // namespace

RunResult run_trials(const ProtocolConfig& cfg, const CollectiveAttackSpec& attack,
                     std::size_t trials) {
    cfg.validate(attack);
    std::ostringstream csv;
    csv << transcript_csv_header() << '\n';

    RunSummary s;
    s.trials = trials;
    std::size_t passing = 0, agreements = 0;
    double err_info = 0.0, err_z = 0.0, err_x = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const ProtocolTranscript t = run_protocol(cfg, attack, trial);
        csv << transcript_csv_row(trial, t) << '\n';
        if (!t.test_passed) ++s.aborts;
        if (cfg.n > 0)
            err_info += static_cast<double>(t.c_s.weight()) / static_cast<double>(cfg.n);
        if (cfg.n_z > 0)
            err_z += static_cast<double>(t.c_z.weight()) / static_cast<double>(cfg.n_z);
        if (cfg.n_x > 0)
            err_x += static_cast<double>(t.c_b.weight()) / static_cast<double>(cfg.n_x);
        if (t.test_passed) {
            ++passing;
            if (t.keys_equal()) ++agreements;
            else ++s.failures_while_passing;
        }
    }
    s.abort_rate = static_cast<double>(s.aborts) / static_cast<double>(trials);
    s.abort_rate_se = binomial_se(s.abort_rate, trials);
    s.mean_error_rate_info = err_info / static_cast<double>(trials);
    s.mean_error_rate_test_z = err_z / static_cast<double>(trials);
    s.mean_error_rate_test_x = err_x / static_cast<double>(trials);
    if (passing > 0) {
        s.key_agreement_rate = static_cast<double>(agreements) / static_cast<double>(passing);
        s.key_agreement_se = binomial_se(s.key_agreement_rate, passing);
    }
    return RunResult{csv.str(), s};
}

namespace {

struct SweepInstance {
    CollectiveAttackSpec attack;
    std::size_t n, r, m;
    // sweep-local dimension budget; instances over it become skipped rows
    double dim_cap = static_cast<double>(kMaxRhoHatDim);
};

void append_instance_rows(const SweepInstance& inst, PhiloxRng& code_rng,
                          std::vector<VerifyRow>& rows) {
    const std::size_t n = inst.n, r = inst.r, m = inst.m;
    VerifyRow base;
    base.attack = inst.attack.name();
    base.n = n;
    base.r = r;
    base.m = m;

    double dim = 1.0;
    for (std::size_t j = 0; j < n; ++j) dim *= static_cast<double>(inst.attack.probe_dim());
    if (dim > inst.dim_cap) {
        base.skipped = true;
        rows.push_back(base);
        return;
    }

    const LinearCodeSpec code = random_code(n, r, m, code_rng);
    std::vector<BitString> vectors;
    for (std::size_t i = 0; i < r; ++i) vectors.push_back(code.pc.row(i));
    for (std::size_t i = 0; i < m; ++i) vectors.push_back(code.pk.row(i));
    base.d_rm = code_distance_drm(vectors, r, m);
    base.q_x = error_rate(inst.attack, Basis::X);
    const double bound = theorem1_rhs(m, n, base.q_x, base.d_rm);

    for (std::uint64_t xi_idx = 0; xi_idx < (std::uint64_t{1} << r); ++xi_idx) {
        const BitString xi = bits_from_index(xi_idx, r);
        std::vector<DensityMatrix> states;
        states.reserve(std::size_t{1} << m);
        for (std::uint64_t k_idx = 0; k_idx < (std::uint64_t{1} << m); ++k_idx)
            states.push_back(rho_hat_k(inst.attack, code, xi, bits_from_index(k_idx, m)));
        for (std::uint64_t ka = 0; ka < states.size(); ++ka) {
            for (std::uint64_t kb = ka + 1; kb < states.size(); ++kb) {
                VerifyRow row = base;
                row.xi = xi.to_string();
                row.key_a = bits_from_index(ka, m).to_string();
                row.key_b = bits_from_index(kb, m).to_string();
                row.bound = bound;
                row.distance = trace_distance(states[ka], states[kb]);
                row.margin = row.bound - row.distance;
                rows.push_back(std::move(row));
            }
        }
    }
}

} // namespace

std::vector<VerifyRow> verify_distance_sweep(const VerifySweepSpec& spec) {
    std::vector<CollectiveAttackSpec> qubit_probe_attacks = {
        CollectiveAttackSpec::identity(),
        CollectiveAttackSpec::bitflip(),
        CollectiveAttackSpec::cnot_z(),
        CollectiveAttackSpec::cnot_x(),
        CollectiveAttackSpec::partial_copy_z(0.6),
        CollectiveAttackSpec::partial_copy_z(2.4),
    };
    // (r, m) choices per n; kept small at large n so the exact
    // diagonalizations stay tractable
    auto code_shapes = [](std::size_t n) -> std::vector<std::pair<std::size_t, std::size_t>> {
        switch (n) {
            case 2: return {{0, 1}, {1, 1}};
            case 3: return {{0, 2}, {1, 1}};
            case 4: return {{1, 2}, {2, 2}};
            case 5: return {{1, 2}, {2, 2}};
            case 6: return {{1, 3}, {2, 2}};
            case 7: return {{1, 2}, {2, 1}};
            default: return {{0, 1}, {1, 1}};
        }
    };

    std::vector<VerifyRow> rows;
    std::uint64_t instance_index = 0;
    for (std::size_t n = spec.min_n; n <= spec.max_n; ++n) {
        for (const auto& [r, m] : code_shapes(n)) {
            if (r + m > n) continue;
            for (const auto& attack : qubit_probe_attacks) {
                PhiloxRng code_rng(spec.seed, instance_index++);
                append_instance_rows({attack, n, r, m}, code_rng, rows);
            }
        }
    }
    if (spec.include_probe_dim4) {
        const std::vector<CollectiveAttackSpec> wide_attacks = {
            CollectiveAttackSpec::identity(4),
            channel_noise_wrapper(0.02, 0.05),
        };
        for (std::size_t n = spec.min_n; n <= spec.max_n; ++n) {
            for (const auto& attack : wide_attacks) {
                if (n < 2) continue;
                PhiloxRng code_rng(spec.seed, instance_index++);
                // wide probes get a tighter dimension budget (4^n grows
                // fast); instances over it show up as explicit skipped rows
                append_instance_rows({attack, n, 1, 1, 256.0}, code_rng, rows);
            }
        }
    }
    return rows;
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
    std::ostringstream os;
    fmt(os);
    os << "attack,n,r,m,d_rm,q_x,xi,key_a,key_b,skipped,distance,bound,margin\n";
    for (const auto& row : rows) {
        os << row.attack << ',' << row.n << ',' << row.r << ',' << row.m << ','
           << row.d_rm << ',' << row.q_x << ',' << row.xi << ',' << row.key_a << ','
           << row.key_b << ',' << (row.skipped ? 1 : 0) << ',' << row.distance << ','
           << row.bound << ',' << row.margin << '\n';
    }
    return os.str();
}

double worst_margin(const std::vector<VerifyRow>& rows) {
    double worst = 0.0;
    for (const auto& row : rows) {
        if (!row.skipped) worst = std::min(worst, row.margin);
    }
    return worst;
}

std::string curve_csv(double grid_start, double grid_end, double grid_step) {
    std::ostringstream os;
    fmt(os);
    os << "p_ax,p_az\n";
    // integer stepping avoids drift in the last grid points
    const auto steps = static_cast<std::size_t>(
        std::floor((grid_end - grid_start) / grid_step + 1e-9));
    for (std::size_t idx = 0; idx <= steps; ++idx) {
        const double p_ax = grid_start + static_cast<double>(idx) * grid_step;
        const CurvePoint pt = threshold_curve_point(p_ax);
        os << p_ax << ',';
        if (pt.solvable) os << pt.p_az;
        else os << "none";
        os << '\n';
    }
    return os.str();
}

std::string hoeffding_csv(std::size_t n, std::size_t n_x,
                          const std::vector<std::size_t>& population_weights,
                          const std::vector<double>& eps_grid, std::size_t trials,
                          std::uint64_t seed) {
    std::ostringstream os;
    fmt(os);
    os << "n,n_x,population_weight,eps,empirical,standard_error,bound\n";
    std::uint64_t stream = 0;
    for (std::size_t weight : population_weights) {
        BitString population(n + n_x);
        for (std::size_t j = 0; j < weight; ++j) population.set_bit(j, 1);
        PhiloxRng rng(seed, stream++);
        const auto points = hoeffding_empirical(population, n, eps_grid, trials, rng);
        for (const auto& pt : points) {
            os << n << ',' << n_x << ',' << weight << ',' << pt.eps << ','
               << pt.empirical << ',' << pt.standard_error << ',' << pt.bound << '\n';
        }
    }
    return os.str();
}

std::string bounds_csv(const std::vector<BoundParams>& params) {
    std::ostringstream os;
    fmt(os);
    os << "n,n_z,n_x,r,m,p_az,p_ax,eps_sec,eps_rel,"
          "security_bound,reliability_bound,composability_bound,secret_rate\n";
    for (const auto& p : params) {
        const BoundReport rep = bound_report(p);
        os << p.n << ',' << p.n_z << ',' << p.n_x << ',' << p.r << ',' << p.m << ','
           << p.p_az << ',' << p.p_ax << ',' << p.eps_sec << ',' << p.eps_rel << ','
           << rep.security_bound << ',' << rep.reliability_bound << ','
           << rep.composability_bound << ',' << rep.secret_rate << '\n';
    }
    return os.str();
}

} // namespace bb84
