#include "bb84/attack.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bb84 {

CollectiveAttackSpec::CollectiveAttackSpec(Eigen::Index probe_dim, CMatrix unitary,
                                           std::string name)
    : probe_dim_(probe_dim), unitary_(std::move(unitary)), name_(std::move(name)) {
    if (probe_dim_ < 1)
        throw std::invalid_argument("CollectiveAttackSpec: probe_dim must be >= 1");
    if (unitary_.rows() != 2 * probe_dim_ || unitary_.cols() != 2 * probe_dim_)
        throw std::invalid_argument("CollectiveAttackSpec: unitary must be (2*probe_dim) square");
    if (!is_unitary(unitary_))
        throw std::invalid_argument("CollectiveAttackSpec: matrix is not unitary");
}

CVector CollectiveAttackSpec::initial_probe() const {
    CVector probe = CVector::Zero(probe_dim_);
    probe(0) = 1.0;
    return probe;
}

CollectiveAttackSpec CollectiveAttackSpec::identity(Eigen::Index probe_dim) {
    return CollectiveAttackSpec(probe_dim, CMatrix::Identity(2 * probe_dim, 2 * probe_dim),
                                "identity");
}

CollectiveAttackSpec CollectiveAttackSpec::bitflip() {
    CMatrix x = CMatrix::Zero(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    return CollectiveAttackSpec(2, kron(CMatrix::Identity(2, 2), x), "bitflip");
}

CollectiveAttackSpec CollectiveAttackSpec::partial_copy_z(double theta) {
    // |e,t>: if t = 1 the probe is rotated by Ry(theta); t is untouched.
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    CMatrix u = CMatrix::Zero(4, 4);
    // t = 0 block: probe identity
    u(0 * 2 + 0, 0 * 2 + 0) = 1.0;
    u(1 * 2 + 0, 1 * 2 + 0) = 1.0;
    // t = 1 block: probe Ry(theta) = [[c, -s], [s, c]]
    u(0 * 2 + 1, 0 * 2 + 1) = c;
    u(0 * 2 + 1, 1 * 2 + 1) = -s;
    u(1 * 2 + 1, 0 * 2 + 1) = s;
    u(1 * 2 + 1, 1 * 2 + 1) = c;
    std::ostringstream name;
    name << "partial:" << theta;
    return CollectiveAttackSpec(2, std::move(u), name.str());
}

CollectiveAttackSpec CollectiveAttackSpec::partial_copy_x(double theta) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CMatrix h(2, 2);
    h << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
    const CMatrix hh = kron(CMatrix::Identity(2, 2), h);
    const CMatrix uz = partial_copy_z(theta).unitary();
    std::ostringstream name;
    name << "partial-x:" << theta;
    return CollectiveAttackSpec(2, hh * uz * hh, name.str());
}

CollectiveAttackSpec CollectiveAttackSpec::cnot_z() {
    CollectiveAttackSpec a = partial_copy_z(M_PI);
    return CollectiveAttackSpec(2, a.unitary(), "cnot-z");
}

CollectiveAttackSpec CollectiveAttackSpec::cnot_x() {
    CollectiveAttackSpec a = partial_copy_x(M_PI);
    return CollectiveAttackSpec(2, a.unitary(), "cnot-x");
}

CollectiveAttackSpec CollectiveAttackSpec::builtin(const std::string& id) {
    if (id == "identity") return identity();
    if (id == "bitflip") return bitflip();
    if (id == "cnot-z") return cnot_z();
    if (id == "cnot-x") return cnot_x();
    if (id.rfind("partial:", 0) == 0) {
        const double theta = std::stod(id.substr(8));
        return partial_copy_z(theta);
    }
    throw std::invalid_argument("unknown built-in attack: " + id);
}

CollectiveAttackSpec CollectiveAttackSpec::compose(const CollectiveAttackSpec& first,
                                                   const CollectiveAttackSpec& second) {
    const Eigen::Index da = first.probe_dim();
    const Eigen::Index db = second.probe_dim();
    const Eigen::Index dim = da * db * 2;
    // basis |a,b,t>, index (a*db + b)*2 + t
    CMatrix u1 = CMatrix::Zero(dim, dim);
    CMatrix u2 = CMatrix::Zero(dim, dim);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index ap = 0; ap < da; ++ap)
            for (Eigen::Index b = 0; b < db; ++b)
                for (Eigen::Index t = 0; t < 2; ++t)
                    for (Eigen::Index tp = 0; tp < 2; ++tp)
                        u1((ap * db + b) * 2 + tp, (a * db + b) * 2 + t) =
                            first.unitary()(ap * 2 + tp, a * 2 + t);
    for (Eigen::Index b = 0; b < db; ++b)
        for (Eigen::Index bp = 0; bp < db; ++bp)
            for (Eigen::Index a = 0; a < da; ++a)
                for (Eigen::Index t = 0; t < 2; ++t)
                    for (Eigen::Index tp = 0; tp < 2; ++tp)
                        u2((a * db + bp) * 2 + tp, (a * db + b) * 2 + t) =
                            second.unitary()(bp * 2 + tp, b * 2 + t);
    return CollectiveAttackSpec(da * db, u2 * u1,
                                first.name() + "*" + second.name());
}

std::string CollectiveAttackSpec::to_text() const {
    std::ostringstream os;
    os << "probe_dim " << probe_dim_ << '\n';
    const Eigen::Index dim = unitary_.rows();
    os << dim << ' ' << dim << '\n';
    os.precision(17);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (j) os << ' ';
            os << unitary_(i, j).real() << ' ' << unitary_(i, j).imag();
        }
        os << '\n';
    }
    return os.str();
}

CollectiveAttackSpec CollectiveAttackSpec::from_text(std::istream& in) {
    std::string tag;
    Eigen::Index probe_dim = 0;
    if (!(in >> tag >> probe_dim) || tag != "probe_dim")
        throw std::invalid_argument("attack spec: expected 'probe_dim <d>'");
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows != cols)
        throw std::invalid_argument("attack spec: bad matrix header");
    CMatrix u(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re, im;
            if (!(in >> re >> im))
                throw std::invalid_argument("attack spec: bad matrix entry");
            u(i, j) = Cplx(re, im);
        }
    return CollectiveAttackSpec(probe_dim, std::move(u), "file");
}

CollectiveAttackSpec CollectiveAttackSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open attack spec file: " + path);
    return from_text(in);
}

CVector attacked_state(const CollectiveAttackSpec& attack, int bit, Basis basis) {
    const CVector joint = kron(attack.initial_probe(), qubit_basis_state(bit, basis));
    return attack.unitary() * joint;
}

double outcome_probability(const CVector& psi, Eigen::Index probe_dim,
                           Basis basis, int outcome) {
    double p = 0.0;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index e = 0; e < probe_dim; ++e) {
        const Cplx a0 = psi(e * 2 + 0);
        const Cplx a1 = psi(e * 2 + 1);
        if (basis == Basis::Z) {
            p += std::norm(outcome == 0 ? a0 : a1);
        } else {
            const Cplx amp = (outcome == 0 ? a0 + a1 : a0 - a1) * inv_sqrt2;
            p += std::norm(amp);
        }
    }
    return p;
}

double error_rate(const CollectiveAttackSpec& attack, Basis basis) {
    double total = 0.0;
    for (int bit = 0; bit <= 1; ++bit) {
        const CVector psi = attacked_state(attack, bit, basis);
        total += outcome_probability(psi, attack.probe_dim(), basis, 1 - bit);
    }
    return 0.5 * total;
}

DensityMatrix eve_probe_state(const CollectiveAttackSpec& attack, int bit, Basis basis) {
    const CVector psi = attacked_state(attack, bit, basis);
    const CMatrix joint = psi * psi.adjoint();
    return DensityMatrix(partial_trace(joint, Subsystem::A, attack.probe_dim(), 2));
}

DensityMatrix rho_hat_k(const CollectiveAttackSpec& attack, const LinearCodeSpec& code,
                        const BitString& xi, const BitString& k) {
    const std::size_t n = code.n(), r = code.r(), m = code.m();
    if (xi.size() != r) throw std::invalid_argument("rho_hat_k: length(xi) != r");
    if (k.size() != m) throw std::invalid_argument("rho_hat_k: length(k) != m");

    double dim_d = 1.0;
    for (std::size_t j = 0; j < n; ++j) dim_d *= static_cast<double>(attack.probe_dim());
    if (dim_d > static_cast<double>(kMaxRhoHatDim))
        throw std::runtime_error("instance too large for exhaustive mode: d_E^n = " +
                                 std::to_string(dim_d) + " exceeds cap " +
                                 std::to_string(kMaxRhoHatDim));
    const Eigen::Index dim = static_cast<Eigen::Index>(dim_d);

    // INFO bits are always sent in the z basis (b' = 0...0).
    const CMatrix rho_bit[2] = {eve_probe_state(attack, 0, Basis::Z).matrix(),
                                eve_probe_state(attack, 1, Basis::Z).matrix()};

    // concat(xi, k) against the stacked (r+m) x n matrix
    BitString rhs(r + m);
    for (std::size_t i = 0; i < r; ++i) rhs.set_bit(i, xi.bit(i));
    for (std::size_t i = 0; i < m; ++i) rhs.set_bit(r + i, k.bit(i));
    const std::vector<BitString> xs = solve_all(code.stacked(), rhs);
    if (xs.empty())
        throw std::runtime_error("rho_hat_k: no consistent x (stacked matrix not full rank?)");

    CMatrix acc = CMatrix::Zero(dim, dim);
    for (const BitString& x : xs) {
        CMatrix prod = rho_bit[x.bit(0)];
        for (std::size_t j = 1; j < n; ++j) prod = kron(prod, rho_bit[x.bit(j)]);
        acc += prod;
    }
    acc /= static_cast<double>(xs.size());
    return DensityMatrix(std::move(acc));
}

double binomial_tail(int n, double q, double t) {
    if (n < 1) throw std::invalid_argument("binomial_tail: n must be >= 1");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("binomial_tail: q must be in [0,1]");
    const int k_min = static_cast<int>(std::ceil(t));
    if (k_min <= 0) return 1.0;
    if (k_min > n) return 0.0;
    if (q == 0.0) return 0.0;
    if (q == 1.0) return 1.0;
    // Accumulate from the extreme term inward so small terms are not lost.
    const double logq = std::log(q), log1mq = std::log1p(-q);
    double sum = 0.0;
    for (int k = n; k >= k_min; --k) {
        const double logterm = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(n - k + 1.0) + k * logq + (n - k) * log1mq;
        sum += std::exp(logterm);
    }
    return std::min(sum, 1.0);
}

} // namespace bb84
