// Acceptance suite: one self-contained check per release criterion, each
// printing a single PASS/FAIL line.  The process exits non-zero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "bb84/experiments.hpp"

using namespace bb84;

namespace {

int failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int index, const std::string& name, bool ok, double seconds,
            const std::string& detail) {
    if (!ok) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", ok ? "PASS" : "FAIL", index,
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
}

CMatrix random_complex(Eigen::Index dim, PhiloxRng& rng) {
    CMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            a(i, j) = Cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    return a;
}

DensityMatrix random_density(Eigen::Index dim, PhiloxRng& rng) {
    const CMatrix a = random_complex(dim, rng);
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    return DensityMatrix(rho);
}

// Criterion 1: the symmetric asymptotic threshold equals 0.0756 to within
// 5e-5, in under a second.
void criterion_symmetric_threshold() {
    Timer timer;
    const double p = symmetric_threshold();
    const double diff = std::abs(p - 0.0756);
    std::ostringstream detail;
    detail.precision(10);
    detail << "symmetric_threshold() = " << p << ", |diff from 0.0756| = " << diff
           << " (tolerance 5e-5)";
    bool ok = diff <= 5e-5 && timer.seconds() < 1.0;
    if (!ok) {
        // context for the failure: the returned value is the genuine root of
        // the defining equation, cross-checked here
        const double residual = h2(2.0 * p) + h2(p) - 1.0;
        detail << "; equation residual H2(2p)+H2(p)-1 = " << residual
               << " -- the root is 0.07568, which truncates (but does not round) to "
                  "the quoted 7.56%, so a 5e-5 window around 0.0756 cannot contain it";
    }
    report(1, "symmetric threshold", ok, timer.seconds(), detail.str());
}

// Criterion 2: the asymptotic threshold curve over p_ax = 0, 0.005, ...,
// 0.245 is strictly decreasing, starts at (0, 0.5), approaches p_az = 0 as
// p_ax approaches 0.25, and passes through (0.0756, 0.0756) within 1e-3.
void criterion_curve() {
    Timer timer;
    std::vector<double> grid;
    for (int i = 0; i <= 49; ++i) grid.push_back(i * 0.005);
    const auto curve = threshold_curve(grid);
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!curve[i].solvable) ok = false;
        if (i > 0 && curve[i].p_az >= curve[i - 1].p_az) ok = false;
    }
    if (std::abs(curve.front().p_az - 0.5) > 1e-9) ok = false;
    if (curve.back().p_az > 1e-3) ok = false;
    const CurvePoint sym = threshold_curve_point(0.0756);
    const double sym_diff = std::abs(sym.p_az - 0.0756);
    if (!sym.solvable || sym_diff > 1e-3) ok = false;
    detail.precision(10);
    detail << "50 grid points strictly decreasing, p_az(0) = " << curve.front().p_az
           << ", p_az(0.245) = " << curve.back().p_az << ", p_az(0.0756) = " << sym.p_az
           << " (|diff| = " << sym_diff << " <= 1e-3)";
    ok = ok && timer.seconds() < 5.0;
    report(2, "threshold curve", ok, timer.seconds(), detail.str());
}

// Criterion 3: exhaustive sweep of built-in attacks x random full-rank
// codes, n in 2..8, r+m <= 4, probe dim <= 4: the exact trace distance never
// exceeds the binomial bound by more than 1e-9, with at least 500
// (xi, k, k') instances.
void criterion_distance_verification() {
    Timer timer;
    VerifySweepSpec spec;  // defaults: seed 2024, n in 2..8, wide probes on
    const auto rows = verify_distance_sweep(spec);
    std::size_t checked = 0, skipped = 0, violations = 0;
    double worst = 0.0;
    for (const auto& row : rows) {
        if (row.skipped) {
            ++skipped;
            continue;
        }
        ++checked;
        worst = std::min(worst, row.margin);
        if (row.margin < -1e-9) ++violations;
    }
    std::ostringstream detail;
    detail.precision(6);
    detail << checked << " (xi,k,k') instances checked (" << skipped
           << " skipped rows), violations = " << violations
           << ", worst margin = " << worst;
    const bool ok = checked >= 500 && violations == 0 && timer.seconds() < 600.0;
    report(3, "trace-distance bound verification", ok, timer.seconds(), detail.str());
}

// Criterion 4: for n = n_x = 100 and population weights 10, 20, 50, the
// empirical sampling tails over 1e5 draws never exceed the Hoeffding bound
// plus 3 binomial standard errors.
void criterion_hoeffding() {
    Timer timer;
    const std::vector<double> eps_grid = {0.05, 0.1, 0.15, 0.2};
    bool ok = true;
    double worst_excess = -1.0;
    std::uint64_t stream = 0;
    for (std::size_t weight : {10, 20, 50}) {
        BitString population(200);
        for (std::size_t j = 0; j < weight; ++j) population.set_bit(j, 1);
        PhiloxRng rng(2025, stream++);
        const auto points = hoeffding_empirical(population, 100, eps_grid, 100000, rng);
        for (const auto& pt : points) {
            const double excess = pt.empirical - (pt.bound + 3.0 * pt.standard_error);
            worst_excess = std::max(worst_excess, excess);
            if (excess > 0.0) ok = false;
        }
    }
    std::ostringstream detail;
    detail.precision(6);
    detail << "12 (weight, eps) points, worst (empirical - bound - 3se) = " << worst_excess;
    ok = ok && timer.seconds() < 60.0;
    report(4, "Hoeffding sampling check", ok, timer.seconds(), detail.str());
}

// Criterion 5: reliability.  Channel z-error 0.02, p_az = 0.05,
// eps_rel = 0.02, n = 16 with an exhaustively decodable code correcting
// ceil(n (p_az + eps_rel)) = 2 errors; over 1e4 trials the observed
// P[keys differ and test passed] stays below the reliability bound plus 3
// standard errors.
void criterion_reliability() {
    Timer timer;
    // find a 16-bit code with minimum distance >= 5 (corrects 2 errors) by
    // seeded search over random full-rank codes
    auto min_distance = [](const Gf2Matrix& pc) {
        std::size_t best = pc.cols() + 1;
        for (const auto& c : solve_all(pc, BitString(pc.rows()))) {
            if (c.weight() > 0) best = std::min(best, c.weight());
        }
        return best;
    };
    std::uint64_t stream = 0;
    std::size_t d_min = 0;
    PhiloxRng search_rng(4242, stream);
    LinearCodeSpec code = random_code(16, 10, 4, search_rng);
    while ((d_min = min_distance(code.pc)) < 5) {
        PhiloxRng next_rng(4242, ++stream);
        code = random_code(16, 10, 4, next_rng);
    }

    const auto attack = channel_noise_wrapper(0.02, 0.0);
    const ProtocolConfig cfg(16, 16, 16, Rational::parse("0.05"), Rational::parse("0.05"),
                             code, 6071);
    const std::size_t trials = 10000;
    std::size_t passed = 0, failures_while_passing = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const ProtocolTranscript t = run_protocol(cfg, attack, trial);
        if (!t.test_passed) continue;
        ++passed;
        if (!t.keys_equal()) ++failures_while_passing;
    }
    const double observed =
        static_cast<double>(failures_while_passing) / static_cast<double>(trials);
    const double se = std::sqrt(std::max(observed * (1.0 - observed), 1e-12) /
                                static_cast<double>(trials));
    BoundParams params;
    params.n = 16;
    params.n_z = 16;
    params.n_x = 16;
    params.m = 4;
    params.eps_rel = 0.02;
    const double bound = reliability_exponent_bound(params);
    std::ostringstream detail;
    detail.precision(6);
    detail << "code d_min = " << d_min << " (search stream " << stream << "), " << passed
           << "/" << trials << " trials passed, P[differ and pass] = " << observed
           << " <= bound " << bound << " + 3se";
    const bool ok = observed <= bound + 3.0 * se && timer.seconds() < 300.0;
    report(5, "reliability", ok, timer.seconds(), detail.str());
}

// Criterion 6: robustness.  Identity attack, 1000 trials at
// n = n_z = n_x = 32: no aborts and identical keys in every trial.
void criterion_robustness() {
    Timer timer;
    PhiloxRng code_rng(808, 0);
    const LinearCodeSpec code = random_code(32, 16, 8, code_rng);
    const ProtocolConfig cfg(32, 32, 32, Rational::parse("0.1"), Rational::parse("0.1"),
                             code, 909);
    const RunResult res = run_trials(cfg, CollectiveAttackSpec::identity(), 1000);
    std::ostringstream detail;
    detail << res.summary.aborts << " aborts, key agreement rate "
           << res.summary.key_agreement_rate << " over 1000 trials";
    const bool ok = res.summary.aborts == 0 && res.summary.key_agreement_rate == 1.0 &&
                    res.summary.failures_while_passing == 0 && timer.seconds() < 30.0;
    report(6, "robustness", ok, timer.seconds(), detail.str());
}

// Criterion 7: metric suite.  On 200 random density-matrix pairs with
// dimensions 2..16, the trace distance is symmetric, satisfies the triangle
// inequality, is unitarily invariant, and contracts under partial trace,
// all within 1e-9.
void criterion_metric_suite() {
    Timer timer;
    PhiloxRng rng(7070, 0);
    bool ok = true;
    double worst = 0.0;
    int pairs = 0;
    auto note = [&](double violation) {
        worst = std::max(worst, violation);
        if (violation > 1e-9) ok = false;
    };
    // 120 pairs across plain dimensions: symmetry, triangle, unitarity
    for (int rep = 0; rep < 120; ++rep) {
        const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.uniform_int(15));
        const DensityMatrix rho = random_density(dim, rng);
        const DensityMatrix sigma = random_density(dim, rng);
        const DensityMatrix tau = random_density(dim, rng);
        ++pairs;
        const double d = trace_distance(rho, sigma);
        note(std::abs(d - trace_distance(sigma, rho)));
        note(trace_distance(rho, tau) - (d + trace_distance(sigma, tau)));
        Eigen::HouseholderQR<CMatrix> qr(random_complex(dim, rng));
        const CMatrix u = qr.householderQ();
        note(std::abs(trace_distance(CMatrix(u * rho.matrix() * u.adjoint()),
                                     CMatrix(u * sigma.matrix() * u.adjoint())) -
                      d));
    }
    // 80 pairs on composite dimensions (4..16): partial-trace contraction
    for (int rep = 0; rep < 80; ++rep) {
        const Eigen::Index d_a = 2 + static_cast<Eigen::Index>(rng.uniform_int(3));
        const Eigen::Index d_b = 2 + static_cast<Eigen::Index>(rng.uniform_int(3));
        const DensityMatrix rho = random_density(d_a * d_b, rng);
        const DensityMatrix sigma = random_density(d_a * d_b, rng);
        ++pairs;
        const double full = trace_distance(rho, sigma);
        note(trace_distance(partial_trace(rho, Subsystem::A, d_a, d_b),
                            partial_trace(sigma, Subsystem::A, d_a, d_b)) -
             full);
        note(trace_distance(partial_trace(rho, Subsystem::B, d_a, d_b),
                            partial_trace(sigma, Subsystem::B, d_a, d_b)) -
             full);
    }
    std::ostringstream detail;
    detail.precision(3);
    detail << pairs << " random pairs (dims 2-16), worst violation = " << worst
           << " (tolerance 1e-9)";
    report(7, "trace-distance metric suite", ok, timer.seconds(), detail.str());
}

// Criterion 8: separate-threshold semantics.  Error weights exactly at
// floor(n_z p_az) pass, one more aborts -- and symmetrically for the TEST-X
// threshold -- confirming the strict "more than" comparison on exact
// rationals.
void criterion_threshold_semantics() {
    Timer timer;
    bool ok = true;
    auto with_weight = [](std::size_t len, std::size_t weight) {
        BitString s(len);
        for (std::size_t j = 0; j < weight; ++j) s.set_bit(j, 1);
        return s;
    };
    struct Case {
        std::size_t n_z, n_x;
        const char* p_az;
        const char* p_ax;
    };
    for (const Case& c : {Case{10, 8, "0.2", "0.25"}, Case{10, 10, "1/4", "1/4"},
                          Case{7, 9, "3/7", "1/3"}, Case{12, 12, "0.05", "0.05"}}) {
        const Rational p_az = Rational::parse(c.p_az);
        const Rational p_ax = Rational::parse(c.p_ax);
        const auto floor_z = static_cast<std::size_t>(
            (static_cast<long long>(c.n_z) * p_az.num) / p_az.den);
        const auto floor_x = static_cast<std::size_t>(
            (static_cast<long long>(c.n_x) * p_ax.num) / p_ax.den);
        // z side: boundary passes, one more aborts
        if (!evaluate_test(with_weight(c.n_z, floor_z), BitString(c.n_x), p_az, p_ax))
            ok = false;
        if (floor_z + 1 <= c.n_z &&
            evaluate_test(with_weight(c.n_z, floor_z + 1), BitString(c.n_x), p_az, p_ax))
            ok = false;
        // x side, symmetrically
        if (!evaluate_test(BitString(c.n_z), with_weight(c.n_x, floor_x), p_az, p_ax))
            ok = false;
        if (floor_x + 1 <= c.n_x &&
            evaluate_test(BitString(c.n_z), with_weight(c.n_x, floor_x + 1), p_az, p_ax))
            ok = false;
    }
    report(8, "separate-threshold semantics", ok, timer.seconds(),
           ok ? "boundary weights pass, boundary+1 aborts, on both thresholds"
              : "boundary behavior mismatch");
}

} // namespace

int main() {
    criterion_symmetric_threshold();
    criterion_curve();
    criterion_distance_verification();
    criterion_hoeffding();
    criterion_reliability();
    criterion_robustness();
    criterion_metric_suite();
    criterion_threshold_semantics();
    if (failures > 0) {
        std::printf("%d of 8 criteria failed\n", failures);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}
