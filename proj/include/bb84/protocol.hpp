#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bb84/attack.hpp"
#include "bb84/gf2.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

// Exact rational in lowest terms; thresholds are kept rational so the
// step-6 "more than" comparison has no rounding ambiguity.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);
    // Accepts "a/b" or a plain decimal such as "0.05".
    static Rational parse(const std::string& text);

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;
};

// true iff count <= scale * threshold, exactly.
bool count_within_threshold(std::size_t count, std::size_t scale, const Rational& threshold);

// The partition P = (s, z, b) of the N indices into INFO / TEST-Z / TEST-X.
struct Partition {
    BitString s, z, b;

    std::size_t total() const { return s.size(); }
    void validate(std::size_t n, std::size_t n_z, std::size_t n_x) const;
};

struct ProtocolConfig {
    ProtocolConfig(std::size_t n, std::size_t n_z, std::size_t n_x,
                   Rational p_az, Rational p_ax, LinearCodeSpec code,
                   std::uint64_t seed)
        : n(n), n_z(n_z), n_x(n_x), p_az(p_az), p_ax(p_ax),
          code(std::move(code)), seed(seed) {}

    std::size_t n, n_z, n_x;
    Rational p_az, p_ax;
    LinearCodeSpec code;
    std::uint64_t seed;
    // Keep Eve's per-qubit probe factors in the transcript (analysis
    // modes); only allowed while d_E^n stays within the exhaustive cap.
    bool retain_probe_record = false;

    std::size_t total_bits() const { return n + n_z + n_x; }
    void validate(const CollectiveAttackSpec& attack) const;
};

struct Message {
    int step;            // protocol step that produced the message
    std::string sender;  // "alice" or "bob"
    std::string label;
    std::string payload;
};

struct ProtocolTranscript {
    Partition partition;
    BitString i, i_b;
    BitString c_s, c_z, c_b;  // error substrings on INFO / TEST-Z / TEST-X
    bool test_passed = false;
    std::optional<BitString> xi;
    std::optional<BitString> key_alice;
    std::optional<BitString> key_bob;
    std::vector<Message> published;
    std::vector<CMatrix> probe_record;  // per-qubit probe factors, optional

    bool keys_equal() const {
        return key_alice && key_bob && *key_alice == *key_bob;
    }
};

// Uniform over all valid partitions of N = n + n_z + n_x indices.
Partition sample_partition(std::size_t n, std::size_t n_z, std::size_t n_x, PhiloxRng& rng);

struct TransmissionResult {
    BitString i_b;
    std::vector<CMatrix> probe_record;
};

// Steps 3-4: per qubit, Bob's outcome is sampled from the Born distribution
// of measuring the transmitted subsystem in basis bases[j] (0 = z, 1 = x)
// after the attack unitary acts on |0^E> (x) |i_j^{b_j}>.
TransmissionResult transmit_and_measure(const BitString& i, const BitString& bases,
                                        const CollectiveAttackSpec& attack, PhiloxRng& rng,
                                        bool retain_probe_record = false);

// Step 6: pass iff weight(c_z) <= n_z*p_az AND weight(c_b) <= n_x*p_ax,
// compared exactly ("more than" is read strictly).
bool evaluate_test(const BitString& c_z, const BitString& c_b,
                   const Rational& p_az, const Rational& p_ax);

// Executes protocol steps 2-9 for one trial.  The trial RNG stream is
// (cfg.seed, trial_index).
ProtocolTranscript run_protocol(const ProtocolConfig& cfg,
                                const CollectiveAttackSpec& attack,
                                std::uint64_t trial_index = 0);

// Benign channel noise modeled as a unitary-dilation attack: returns a spec
// whose induced (q_z, q_x) matches the requested rates within 1e-6, built
// from the partial-copy family (x-basis copy for z flips, z-basis copy for
// x flips), solved by bisection on the rotation angle.
CollectiveAttackSpec channel_noise_wrapper(double flip_prob_z, double flip_prob_x);

// Flat `key = value` config text; keys: n, n_z, n_x, p_az, p_ax, seed,
// attack (built-in id or attack:<path>), pc_file, pk_file, trials.
struct ExperimentConfig {
    ProtocolConfig protocol;
    CollectiveAttackSpec attack;
    std::size_t trials = 1;
};
ExperimentConfig load_experiment_config(const std::string& path);

// One CSV row per trial: trial,aborted,weight_cz,weight_cb,weight_cs,keys_equal
std::string transcript_csv_header();
std::string transcript_csv_row(std::size_t trial, const ProtocolTranscript& t);

} // namespace bb84
