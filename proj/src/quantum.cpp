#include "bb84/quantum.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bb84 {

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const CMatrix gram = m.adjoint() * m;
    return (gram - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

DensityMatrix::DensityMatrix(CMatrix entries, bool subnormalized)
    : mat_(std::move(entries)), subnormalized_(subnormalized) {
    if (mat_.rows() != mat_.cols() || mat_.rows() == 0)
        throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
    if (!is_hermitian(mat_))
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    const double tr = mat_.trace().real();
    if (subnormalized_) {
        if (tr > 1.0 + kTraceTol)
            throw std::invalid_argument("DensityMatrix: subnormalized trace exceeds 1");
    } else if (std::abs(tr - 1.0) > kTraceTol) {
        throw std::invalid_argument("DensityMatrix: trace must be 1 (got " +
                                    std::to_string(tr) + ")");
    }
    const Eigen::VectorXd evals = hermitian_eigenvalues(mat_);
    if (evals.minCoeff() < -kEigenvalueTol)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                    std::to_string(evals.minCoeff()));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > kTraceTol)
        throw std::invalid_argument("DensityMatrix::pure: state vector not normalized");
    return DensityMatrix(psi * psi.adjoint());
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& h) {
    if (!is_hermitian(h))
        throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");
    const Eigen::Index n = h.rows();
    CMatrix a = h;

    const double frob = a.norm();
    const double target = 1e-12 * frob;
    constexpr int kMaxSweeps = 100;

    auto off_norm = [&]() {
        double acc = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) acc += 2.0 * std::norm(a(p, q));
        return std::sqrt(acc);
    };

    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Cplx g = a(p, q);
                const double absg = std::abs(g);
                if (absg <= 1e-300) continue;
                // Phase factor reducing the 2x2 block to a real symmetric
                // one, then a classical Jacobi rotation on that block.
                const Cplx u = g / absg;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * absg);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = [[c, s], [-s*conj(u), c*conj(u)]] on coordinates (p,q);
                // apply A <- J^dagger A J via column then row updates.
                const Cplx ubar = std::conj(u);
                {
                    CVector colp = a.col(p);
                    CVector colq = a.col(q);
                    a.col(p) = c * colp - (s * ubar) * colq;
                    a.col(q) = s * colp + (c * ubar) * colq;
                }
                {
                    Eigen::RowVectorXcd rowp = a.row(p);
                    Eigen::RowVectorXcd rowq = a.row(q);
                    a.row(p) = c * rowp - (s * u) * rowq;
                    a.row(q) = s * rowp + (c * u) * rowq;
                }
                a(p, q) = Cplx(0, 0);
                a(q, p) = Cplx(0, 0);
            }
        }
    }

    Eigen::VectorXd evals = a.diagonal().real();
    std::sort(evals.data(), evals.data() + n, std::greater<double>());
    return evals;
}

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    if (!is_hermitian(rho) || !is_hermitian(sigma))
        throw std::invalid_argument("trace_distance: inputs must be Hermitian");
    const Eigen::VectorXd evals = hermitian_eigenvalues(rho - sigma);
    return 0.5 * evals.cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return trace_distance(rho.matrix(), sigma.matrix());
}

CMatrix partial_trace(const CMatrix& rho, Subsystem keep,
                      Eigen::Index d_a, Eigen::Index d_b) {
    if (rho.rows() != d_a * d_b || rho.cols() != d_a * d_b)
        throw std::invalid_argument("partial_trace: dim(rho) != d_a * d_b");
    // Index convention: |a,b> = a*d_b + b.
    if (keep == Subsystem::A) {
        CMatrix out = CMatrix::Zero(d_a, d_a);
        for (Eigen::Index i = 0; i < d_a; ++i)
            for (Eigen::Index j = 0; j < d_a; ++j)
                for (Eigen::Index k = 0; k < d_b; ++k)
                    out(i, j) += rho(i * d_b + k, j * d_b + k);
        return out;
    }
    CMatrix out = CMatrix::Zero(d_b, d_b);
    for (Eigen::Index i = 0; i < d_b; ++i)
        for (Eigen::Index j = 0; j < d_b; ++j)
            for (Eigen::Index k = 0; k < d_a; ++k)
                out(i, j) += rho(k * d_b + i, k * d_b + j);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep,
                            Eigen::Index d_a, Eigen::Index d_b) {
    return DensityMatrix(partial_trace(rho.matrix(), keep, d_a, d_b),
                         rho.subnormalized());
}

CVector apply_unitary(const CMatrix& u, const CVector& psi) {
    if (u.cols() != psi.size())
        throw std::invalid_argument("apply_unitary: dimension mismatch");
    if (!is_unitary(u))
        throw std::invalid_argument("apply_unitary: matrix is not unitary");
    return u * psi;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CVector kron(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

CVector qubit_basis_state(int bit, Basis basis) {
    if (bit != 0 && bit != 1)
        throw std::invalid_argument("qubit_basis_state: bit must be 0 or 1");
    CVector psi(2);
    if (basis == Basis::Z) {
        psi << (bit == 0 ? 1.0 : 0.0), (bit == 0 ? 0.0 : 1.0);
    } else {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        psi << inv_sqrt2, (bit == 0 ? inv_sqrt2 : -inv_sqrt2);
    }
    return psi;
}

std::string matrix_to_text(const CMatrix& m) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << m(i, j).real() << (m(i, j).imag() < 0 ? "" : "+") << m(i, j).imag() << 'i';
        }
        os << '\n';
    }
    return os.str();
}

} // namespace bb84
