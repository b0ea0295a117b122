#include "bb84/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bb84 {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive");
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        return Rational(std::stoll(text.substr(0, slash)),
                        std::stoll(text.substr(slash + 1)));
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text), 1);
    const std::string frac = text.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("Rational::parse: too many decimals");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t whole = dot == 0 ? 0 : std::stoll(text.substr(0, dot));
    const std::int64_t frac_num = frac.empty() ? 0 : std::stoll(frac);
    return Rational(whole * den + frac_num, den);
}

std::string Rational::to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

bool count_within_threshold(std::size_t count, std::size_t scale, const Rational& threshold) {
    // count <= scale * num/den  <=>  count*den <= scale*num
    return static_cast<std::int64_t>(count) * threshold.den <=
           static_cast<std::int64_t>(scale) * threshold.num;
}

void Partition::validate(std::size_t n, std::size_t n_z, std::size_t n_x) const {
    const std::size_t total = n + n_z + n_x;
    if (s.size() != total || z.size() != total || b.size() != total)
        throw std::invalid_argument("Partition: wrong string lengths");
    if (s.weight() != n || z.weight() != n_z || b.weight() != n_x ||
        (s ^ z ^ b).weight() != total)
        throw std::invalid_argument("Partition: supports must be disjoint with given sizes");
}

void ProtocolConfig::validate(const CollectiveAttackSpec& attack) const {
    if (code.n() != n)
        throw std::invalid_argument("ProtocolConfig: code length != n");
    if (p_az.num < 0 || p_az.num > p_az.den || p_ax.num < 0 || p_ax.num > p_ax.den)
        throw std::invalid_argument("ProtocolConfig: thresholds must be in [0,1]");
    if (n > kMaxDecodeBits || n - code.r() > kMaxCosetEnumerationDim)
        throw std::invalid_argument(
            "ProtocolConfig: instance too large for exhaustive decoding (n = " +
            std::to_string(n) + ", n-r = " + std::to_string(n - code.r()) + ")");
    if (retain_probe_record) {
        double dim = 1.0;
        for (std::size_t j = 0; j < n; ++j) dim *= static_cast<double>(attack.probe_dim());
        if (dim > static_cast<double>(kMaxRhoHatDim))
            throw std::invalid_argument(
                "ProtocolConfig: probe record requested but d_E^n exceeds the analysis cap");
    }
}

Partition sample_partition(std::size_t n, std::size_t n_z, std::size_t n_x, PhiloxRng& rng) {
    const std::size_t total = n + n_z + n_x;
    if (total == 0) throw std::invalid_argument("sample_partition: N must be positive");
    enum Label : std::uint8_t { kInfo, kTestZ, kTestX };
    std::vector<std::uint8_t> labels(total);
    std::fill(labels.begin(), labels.begin() + n, kInfo);
    std::fill(labels.begin() + n, labels.begin() + n + n_z, kTestZ);
    std::fill(labels.begin() + n + n_z, labels.end(), kTestX);
    // Fisher-Yates; a uniform permutation of the label multiset gives a
    // uniform partition.
    for (std::size_t j = total - 1; j > 0; --j) {
        const std::size_t pick = rng.uniform_int(j + 1);
        std::swap(labels[j], labels[pick]);
    }
    Partition p{BitString(total), BitString(total), BitString(total)};
    for (std::size_t j = 0; j < total; ++j) {
        if (labels[j] == kInfo) p.s.set_bit(j, 1);
        else if (labels[j] == kTestZ) p.z.set_bit(j, 1);
        else p.b.set_bit(j, 1);
    }
    p.validate(n, n_z, n_x);
    return p;
}

TransmissionResult transmit_and_measure(const BitString& i, const BitString& bases,
                                        const CollectiveAttackSpec& attack, PhiloxRng& rng,
                                        bool retain_probe_record) {
    if (i.size() != bases.size())
        throw std::invalid_argument("transmit_and_measure: length mismatch");
    TransmissionResult result;
    result.i_b = BitString(i.size());
    for (std::size_t j = 0; j < i.size(); ++j) {
        const Basis basis = bases.bit(j) ? Basis::X : Basis::Z;
        const CVector psi = attacked_state(attack, i.bit(j), basis);
        const double p1 = outcome_probability(psi, attack.probe_dim(), basis, 1);
        result.i_b.set_bit(j, rng.uniform() < p1 ? 1 : 0);
        if (retain_probe_record) {
            result.probe_record.push_back(
                partial_trace(psi * psi.adjoint(), Subsystem::A, attack.probe_dim(), 2));
        }
    }
    return result;
}

bool evaluate_test(const BitString& c_z, const BitString& c_b,
                   const Rational& p_az, const Rational& p_ax) {
    return count_within_threshold(c_z.weight(), c_z.size(), p_az) &&
           count_within_threshold(c_b.weight(), c_b.size(), p_ax);
}

namespace {

BitString restrict_to(const BitString& full, const BitString& mask) {
    BitString out(mask.weight());
    std::size_t pos = 0;
    for (std::size_t j = 0; j < full.size(); ++j) {
        if (mask.bit(j)) out.set_bit(pos++, full.bit(j));
    }
    return out;
}

} // namespace

ProtocolTranscript run_protocol(const ProtocolConfig& cfg,
                                const CollectiveAttackSpec& attack,
                                std::uint64_t trial_index) {
    cfg.validate(attack);
    PhiloxRng rng(cfg.seed, trial_index);
    const std::size_t total = cfg.total_bits();

    ProtocolTranscript t;
    // step 2: Alice picks the partition
    t.partition = sample_partition(cfg.n, cfg.n_z, cfg.n_x, rng);
    // step 3: Alice picks i and sends the qubits; basis is x exactly on the
    // TEST-X positions
    t.i = BitString::random(total, rng);
    const BitString& bases = t.partition.b;
    // step 4: b is published only after all qubits were received, then Bob
    // measures in the published bases
    t.published.push_back({4, "alice", "b", bases.to_string()});
    TransmissionResult tx =
        transmit_and_measure(t.i, bases, attack, rng, cfg.retain_probe_record);
    t.i_b = tx.i_b;
    t.probe_record = std::move(tx.probe_record);
    // step 5: Alice publishes s
    t.published.push_back({5, "alice", "s", t.partition.s.to_string()});

    const BitString c = t.i ^ t.i_b;
    t.c_s = restrict_to(c, t.partition.s);
    t.c_z = restrict_to(c, t.partition.z);
    t.c_b = restrict_to(c, t.partition.b);

    // step 6: both sides reveal the test bits (logged as one joint reveal),
    // then compare against the thresholds
    t.published.push_back({6, "alice", "test-bits",
                           restrict_to(t.i, t.partition.z).to_string() + "|" +
                               restrict_to(t.i, t.partition.b).to_string()});
    t.published.push_back({6, "bob", "test-bits",
                           restrict_to(t.i_b, t.partition.z).to_string() + "|" +
                               restrict_to(t.i_b, t.partition.b).to_string()});
    t.test_passed = evaluate_test(t.c_z, t.c_b, cfg.p_az, cfg.p_ax);
    if (!t.test_passed) return t;

    // step 7: INFO strings
    const BitString x = restrict_to(t.i, t.partition.s);
    const BitString x_bob = restrict_to(t.i_b, t.partition.s);
    // step 8: syndrome is sent only when the test passed
    t.xi = syndrome(x, cfg.code.pc);
    t.published.push_back({8, "alice", "syndrome", t.xi->to_string()});
    const BitString x_hat = decode_to_coset_leader(x_bob, cfg.code.pc, *t.xi);
    // step 9: final keys
    t.key_alice = apply_key_map(x, cfg.code.pk);
    t.key_bob = apply_key_map(x_hat, cfg.code.pk);
    return t;
}

namespace {

double partial_copy_rate(double theta, Basis flips) {
    // q(theta) for the copy family, measured from the induced channel
    const CollectiveAttackSpec a = flips == Basis::Z
                                       ? CollectiveAttackSpec::partial_copy_x(theta)
                                       : CollectiveAttackSpec::partial_copy_z(theta);
    return error_rate(a, flips);
}

double solve_theta(double target, Basis flips) {
    double lo = 0.0, hi = 2.0 * M_PI;
    // q(theta) is monotone increasing from 0 to 1 on [0, 2*pi]
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (partial_copy_rate(mid, flips) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

CollectiveAttackSpec channel_noise_wrapper(double flip_prob_z, double flip_prob_x) {
    if (flip_prob_z < 0.0 || flip_prob_z > 1.0 || flip_prob_x < 0.0 || flip_prob_x > 1.0)
        throw std::invalid_argument(
            "channel_noise_wrapper: realizable frontier is q_z in [0,1], q_x in [0,1]");
    CollectiveAttackSpec attack = CollectiveAttackSpec::identity(1);
    if (flip_prob_z == 0.0 && flip_prob_x == 0.0) {
        attack = CollectiveAttackSpec::identity();
    } else if (flip_prob_x == 0.0) {
        attack = CollectiveAttackSpec::partial_copy_x(solve_theta(flip_prob_z, Basis::Z));
    } else if (flip_prob_z == 0.0) {
        attack = CollectiveAttackSpec::partial_copy_z(solve_theta(flip_prob_x, Basis::X));
    } else {
        // x-basis copy first (z flips), then z-basis copy (x flips); the
        // two stages disturb complementary bases, so the rates compose
        // independently.
        attack = CollectiveAttackSpec::compose(
            CollectiveAttackSpec::partial_copy_x(solve_theta(flip_prob_z, Basis::Z)),
            CollectiveAttackSpec::partial_copy_z(solve_theta(flip_prob_x, Basis::X)));
    }
    const double got_z = error_rate(attack, Basis::Z);
    const double got_x = error_rate(attack, Basis::X);
    if (std::abs(got_z - flip_prob_z) > 1e-6 || std::abs(got_x - flip_prob_x) > 1e-6)
        throw std::runtime_error("channel_noise_wrapper: requested rates (" +
                                 std::to_string(flip_prob_z) + ", " +
                                 std::to_string(flip_prob_x) +
                                 ") not realized; induced (" + std::to_string(got_z) +
                                 ", " + std::to_string(got_x) + ")");
    return attack;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto first = s.find_first_not_of(" \t\r");
            const auto last = s.find_last_not_of(" \t\r");
            return first == std::string::npos ? std::string{}
                                              : s.substr(first, last - first + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto require = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument("config: missing required key '" + key + "'");
        return it->second;
    };

    const std::size_t n = std::stoull(require("n"));
    const std::size_t n_z = std::stoull(require("n_z"));
    const std::size_t n_x = std::stoull(require("n_x"));
    const Rational p_az = Rational::parse(require("p_az"));
    const Rational p_ax = Rational::parse(require("p_ax"));
    const std::uint64_t seed = kv.count("seed") ? std::stoull(kv["seed"]) : 0;
    const std::size_t trials = kv.count("trials") ? std::stoull(kv["trials"]) : 1;

    LinearCodeSpec code(Gf2Matrix::load(require("pc_file")),
                        Gf2Matrix::load(require("pk_file")));

    const std::string attack_id = require("attack");
    CollectiveAttackSpec attack = [&] {
        try {
            return CollectiveAttackSpec::builtin(attack_id);
        } catch (const std::invalid_argument&) {
            return CollectiveAttackSpec::load(attack_id);
        }
    }();

    ProtocolConfig proto(n, n_z, n_x, p_az, p_ax, std::move(code), seed);
    return ExperimentConfig{std::move(proto), std::move(attack), trials};
}

std::string transcript_csv_header() {
    return "trial,aborted,weight_cz,weight_cb,weight_cs,keys_equal";
}

std::string transcript_csv_row(std::size_t trial, const ProtocolTranscript& t) {
    std::ostringstream os;
    os << trial << ',' << (t.test_passed ? 0 : 1) << ',' << t.c_z.weight() << ','
       << t.c_b.weight() << ',' << t.c_s.weight() << ',' << (t.keys_equal() ? 1 : 0);
    return os.str();
}

} // namespace bb84
