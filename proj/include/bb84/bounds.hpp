#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "bb84/gf2.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

struct BoundParams {
    std::size_t n = 0, n_z = 0, n_x = 0;
    std::size_t r = 0, m = 0;
    double p_az = 0.0, p_ax = 0.0;
    double eps_sec = 0.0, eps_rel = 0.0;

    double key_rate() const { return static_cast<double>(m) / static_cast<double>(n); }
};

struct BoundReport {
    double security_bound = 0.0;
    double reliability_bound = 0.0;
    double composability_bound = 0.0;
    double secret_rate = 0.0;
};

// Binary entropy -x log2 x - (1-x) log2(1-x), with h2(0) = h2(1) = 0 by
// continuity.
double h2(double x);

// Asymptotic secret-key rate
// 1 - H_2(2 p_ax + 2 eps_sec) - H_2(p_az + eps_rel + 1/n); the 1/n term is
// dropped when n is infinite.
double secret_rate(double p_az, double p_ax, double eps_sec, double eps_rel,
                   double n = std::numeric_limits<double>::infinity());

// 2 R n exp(-(n_x/(n+n_x))^2 n eps_sec^2), R = m/n.
double security_exponent_bound(const BoundParams& p);

// exp(-2 (n_z/(n+n_z))^2 n eps_rel^2).
double reliability_exponent_bound(const BoundParams& p);

// Sum of the two exponent bounds.
double composability_bound(const BoundParams& p);

BoundReport bound_report(const BoundParams& p);

// exp(-2 (n_x/(n+n_x))^2 n eps^2): the tail bound for sampling n items
// without replacement from a population of n + n_x bits.
double hoeffding_tail_bound(std::size_t n, std::size_t n_x, double eps);

struct HoeffdingPoint {
    double eps;
    double empirical;       // fraction of trials with sample mean - mu > (n_x/(n+n_x)) eps
    double standard_error;  // binomial standard error of the fraction
    double bound;           // hoeffding_tail_bound at this eps
};

// Monte-Carlo tail estimate: draws a sample of size `sample_size` without
// replacement from the population bits, `trials` times.
std::vector<HoeffdingPoint> hoeffding_empirical(const BitString& population,
                                                std::size_t sample_size,
                                                const std::vector<double>& eps_grid,
                                                std::size_t trials, PhiloxRng& rng);

// 2 m sqrt(P[Bin(n, q_x) >= d_rm / 2]): the right-hand side of the
// trace-distance bound for collective i.i.d. errors.
double theorem1_rhs(std::size_t m, std::size_t n, double q_x, std::size_t d_rm);

struct CurvePoint {
    double p_ax;
    double p_az;
    bool solvable;  // false for p_ax >= 0.25 (no p_az solves the equation)
};

// For each grid value, the unique p_az in [0, 0.5) with
// H_2(2 p_ax) + H_2(p_az) = 1, found by bisection to 1e-10.
std::vector<CurvePoint> threshold_curve(const std::vector<double>& p_ax_grid);
CurvePoint threshold_curve_point(double p_ax);

// The p solving H_2(2p) + H_2(p) = 1 on (0, 0.25): the symmetric
// asymptotic error-rate threshold.
double symmetric_threshold();

} // namespace bb84
