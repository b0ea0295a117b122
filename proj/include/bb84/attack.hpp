#pragma once

#include <string>

#include "bb84/gf2.hpp"
#include "bb84/quantum.hpp"

namespace bb84 {

// One collective attack: the same unitary acts on probe (x) qubit for every
// transmitted qubit, with the probe prepared in |0>.  Tensor ordering is
// probe first, transmitted qubit second.
class CollectiveAttackSpec {
public:
    CollectiveAttackSpec(Eigen::Index probe_dim, CMatrix unitary, std::string name = "custom");

    Eigen::Index probe_dim() const { return probe_dim_; }
    const CMatrix& unitary() const { return unitary_; }
    const std::string& name() const { return name_; }
    CVector initial_probe() const;

    // Named built-ins: "identity", "bitflip", "cnot-z", "cnot-x",
    // "partial:<theta>".
    static CollectiveAttackSpec builtin(const std::string& id);
    static CollectiveAttackSpec identity(Eigen::Index probe_dim = 2);
    static CollectiveAttackSpec bitflip();
    static CollectiveAttackSpec cnot_z();
    static CollectiveAttackSpec cnot_x();
    // Controlled probe rotation by theta (control = qubit z value for
    // partial_copy_z, qubit x value for partial_copy_x).  theta = pi gives
    // the full CNOT copy.
    static CollectiveAttackSpec partial_copy_z(double theta);
    static CollectiveAttackSpec partial_copy_x(double theta);

    // Sequential composition on a shared qubit with independent probes:
    // `first` acts with probe A, then `second` with probe B.  The combined
    // probe is A (x) B.
    static CollectiveAttackSpec compose(const CollectiveAttackSpec& first,
                                        const CollectiveAttackSpec& second);

    // Attack spec text format: line "probe_dim <d>", then the unitary in
    // the shared matrix text format with complex entries "re im".
    std::string to_text() const;
    static CollectiveAttackSpec from_text(std::istream& in);
    static CollectiveAttackSpec load(const std::string& path);

private:
    Eigen::Index probe_dim_;
    CMatrix unitary_;
    std::string name_;
};

// Joint probe (x) qubit state after the attack acts on one transmitted
// |bit^basis>.
CVector attacked_state(const CollectiveAttackSpec& attack, int bit, Basis basis);

// Probability that measuring the transmitted qubit of `psi` in `basis`
// yields `outcome`.
double outcome_probability(const CVector& psi, Eigen::Index probe_dim,
                           Basis basis, int outcome);

// Probability that Bob's measurement in `basis` differs from the sent bit,
// averaged over the sent bit value with equal weight.
double error_rate(const CollectiveAttackSpec& attack, Basis basis);

// Eve's probe state after the attack on a single transmitted
// |bit^basis>: the transmitted qubit is traced out entirely.
DensityMatrix eve_probe_state(const CollectiveAttackSpec& attack, int bit, Basis basis);

// Cap on the dimension d_E^n of the exhaustively constructed rho_hat.
inline constexpr Eigen::Index kMaxRhoHatDim = 4096;

// Equal mixture over the 2^{n-r-m} INFO strings x consistent with
// (xi, k) of the n-fold product of Eve's per-bit probe states, with all
// INFO bits encoded in the z basis.
DensityMatrix rho_hat_k(const CollectiveAttackSpec& attack, const LinearCodeSpec& code,
                        const BitString& xi, const BitString& k);

// Exact P[Bin(n, q) >= t].
double binomial_tail(int n, double q, double t);

} // namespace bb84
