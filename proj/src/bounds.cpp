#include "bb84/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bb84/attack.hpp"

namespace bb84 {

double h2(double x) {
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("h2: argument " + std::to_string(x) +
                                    " outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    constexpr double kInvLog2 = 1.4426950408889634;  // 1/ln 2
    // -x ln x - (1-x) ln(1-x), with log1p near the endpoints
    return -(x * std::log(x) + (1.0 - x) * std::log1p(-x)) * kInvLog2;
}

double secret_rate(double p_az, double p_ax, double eps_sec, double eps_rel, double n) {
    const double arg_x = 2.0 * p_ax + 2.0 * eps_sec;
    const double inv_n = std::isinf(n) ? 0.0 : 1.0 / n;
    const double arg_z = p_az + eps_rel + inv_n;
    if (arg_x < 0.0 || arg_x > 1.0)
        throw std::invalid_argument("secret_rate: entropy argument 2*p_ax + 2*eps_sec = " +
                                    std::to_string(arg_x) + " outside [0,1]");
    if (arg_z < 0.0 || arg_z > 1.0)
        throw std::invalid_argument("secret_rate: entropy argument p_az + eps_rel + 1/n = " +
                                    std::to_string(arg_z) + " outside [0,1]");
    return 1.0 - h2(arg_x) - h2(arg_z);
}

double security_exponent_bound(const BoundParams& p) {
    const double ratio = static_cast<double>(p.n_x) / static_cast<double>(p.n + p.n_x);
    return 2.0 * p.key_rate() * static_cast<double>(p.n) *
           std::exp(-ratio * ratio * static_cast<double>(p.n) * p.eps_sec * p.eps_sec);
}

double reliability_exponent_bound(const BoundParams& p) {
    const double ratio = static_cast<double>(p.n_z) / static_cast<double>(p.n + p.n_z);
    return std::exp(-2.0 * ratio * ratio * static_cast<double>(p.n) * p.eps_rel * p.eps_rel);
}

double composability_bound(const BoundParams& p) {
    return reliability_exponent_bound(p) + security_exponent_bound(p);
}

BoundReport bound_report(const BoundParams& p) {
    BoundReport rep;
    rep.security_bound = security_exponent_bound(p);
    rep.reliability_bound = reliability_exponent_bound(p);
    rep.composability_bound = rep.reliability_bound + rep.security_bound;
    rep.secret_rate = secret_rate(p.p_az, p.p_ax, p.eps_sec, p.eps_rel,
                                  static_cast<double>(p.n));
    return rep;
}

double hoeffding_tail_bound(std::size_t n, std::size_t n_x, double eps) {
    if (n < 1 || n_x < 1)
        throw std::invalid_argument("hoeffding_tail_bound: n and n_x must be >= 1");
    if (eps < 0.0) throw std::invalid_argument("hoeffding_tail_bound: eps must be >= 0");
    const double ratio = static_cast<double>(n_x) / static_cast<double>(n + n_x);
    return std::exp(-2.0 * ratio * ratio * static_cast<double>(n) * eps * eps);
}

std::vector<HoeffdingPoint> hoeffding_empirical(const BitString& population,
                                                std::size_t sample_size,
                                                const std::vector<double>& eps_grid,
                                                std::size_t trials, PhiloxRng& rng) {
    if (trials < 1) throw std::invalid_argument("hoeffding_empirical: trials must be >= 1");
    const std::size_t pop_size = population.size();
    if (sample_size == 0 || sample_size > pop_size)
        throw std::invalid_argument("hoeffding_empirical: bad sample size");
    const std::size_t n_x = pop_size - sample_size;
    const double mu = static_cast<double>(population.weight()) / static_cast<double>(pop_size);
    const double scale = static_cast<double>(n_x) / static_cast<double>(pop_size);

    std::vector<std::size_t> exceed(eps_grid.size(), 0);
    std::vector<std::size_t> indices(pop_size);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    for (std::size_t trial = 0; trial < trials; ++trial) {
        // partial Fisher-Yates: the first sample_size entries are a uniform
        // sample without replacement
        std::size_t ones = 0;
        for (std::size_t j = 0; j < sample_size; ++j) {
            const std::size_t pick = j + rng.uniform_int(pop_size - j);
            std::swap(indices[j], indices[pick]);
            ones += population.bit(indices[j]);
        }
        const double deviation =
            static_cast<double>(ones) / static_cast<double>(sample_size) - mu;
        for (std::size_t g = 0; g < eps_grid.size(); ++g) {
            if (deviation > scale * eps_grid[g]) ++exceed[g];
        }
    }

    std::vector<HoeffdingPoint> out;
    out.reserve(eps_grid.size());
    for (std::size_t g = 0; g < eps_grid.size(); ++g) {
        const double frac = static_cast<double>(exceed[g]) / static_cast<double>(trials);
        HoeffdingPoint pt;
        pt.eps = eps_grid[g];
        pt.empirical = frac;
        pt.standard_error = std::sqrt(frac * (1.0 - frac) / static_cast<double>(trials));
        pt.bound = n_x == 0 ? 1.0 : hoeffding_tail_bound(sample_size, n_x, eps_grid[g]);
        out.push_back(pt);
    }
    return out;
}

double theorem1_rhs(std::size_t m, std::size_t n, double q_x, std::size_t d_rm) {
    const double tail = binomial_tail(static_cast<int>(n), q_x,
                                      static_cast<double>(d_rm) / 2.0);
    return 2.0 * static_cast<double>(m) * std::sqrt(tail);
}

namespace {

constexpr double kBisectTol = 1e-10;
constexpr double kBracketPad = 1e-12;

// Solves h2(p) = target on [pad, 0.5 - pad]; h2 is strictly increasing
// there.
double invert_h2(double target) {
    double lo = kBracketPad, hi = 0.5 - kBracketPad;
    while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        if (h2(mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

CurvePoint threshold_curve_point(double p_ax) {
    if (p_ax < 0.0 || p_ax >= 0.25) return CurvePoint{p_ax, 0.0, false};
    const double target = 1.0 - h2(2.0 * p_ax);
    if (p_ax == 0.0) return CurvePoint{0.0, 0.5, true};
    return CurvePoint{p_ax, invert_h2(target), true};
}

std::vector<CurvePoint> threshold_curve(const std::vector<double>& p_ax_grid) {
    std::vector<CurvePoint> out;
    out.reserve(p_ax_grid.size());
    for (double p : p_ax_grid) out.push_back(threshold_curve_point(p));
    return out;
}

double symmetric_threshold() {
    // H_2(2p) + H_2(p) = 1; the left side is strictly increasing in p on
    // (0, 0.25)
    double lo = kBracketPad, hi = 0.25 - kBracketPad;
    while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        if (h2(2.0 * mid) + h2(mid) < 1.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace bb84
