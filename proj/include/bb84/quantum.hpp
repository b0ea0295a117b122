#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace bb84 {

using Cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kEigenvalueTol = 1e-9;

bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);
bool is_unitary(const CMatrix& m, double tol = kUnitaryTol);

// Complex Hermitian PSD matrix with unit trace.  Subnormalized mixtures
// (trace <= 1) are permitted only when flagged explicitly; they model abort
// events where the state is replaced by the zero operator.
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix entries, bool subnormalized = false);

    Eigen::Index dim() const { return mat_.rows(); }
    const CMatrix& matrix() const { return mat_; }
    bool subnormalized() const { return subnormalized_; }

    static DensityMatrix pure(const CVector& psi);

private:
    CMatrix mat_;
    bool subnormalized_;
};

// Eigenvalues of a Hermitian matrix, descending, via cyclic Jacobi
// rotations.  Sweeps until the off-diagonal Frobenius norm drops below
// 1e-12 * ||h||_F, capped at 100 sweeps.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& h);

// (1/2) sum |eigenvalues(rho - sigma)|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const CMatrix& rho, const CMatrix& sigma);

enum class Subsystem { A, B };

// Partial trace of a state on A (x) B with dims (d_a, d_b), keeping the
// named subsystem.
CMatrix partial_trace(const CMatrix& rho, Subsystem keep,
                      Eigen::Index d_a, Eigen::Index d_b);
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep,
                            Eigen::Index d_a, Eigen::Index d_b);

CVector apply_unitary(const CMatrix& u, const CVector& psi);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

enum class Basis { Z, X };

// |bit> in the z basis; (|0> +- |1>)/sqrt(2) in the x basis.
CVector qubit_basis_state(int bit, Basis basis);

// Debug text form: one row per line, "a+bi" entries.
std::string matrix_to_text(const CMatrix& m);

} // namespace bb84
