// operator_core.hpp — dense complex operators, multi-qubit embedding, Hermitian spectra
//
// Basis convention for N two-level particles: computational basis with particle 1
// as the most significant bit; |0> = ground, |1> = excited. Basis index b encodes
// particle n in bit (N - n).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace dfslab {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Largest particle count for which full 2^N operators are built.
inline constexpr int max_particles = 14;

inline constexpr double hermitian_tol = 1e-12;

struct HermitianSpectrum {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors; // column i pairs with eigenvalues[i]
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// sigma^- = |g><e| on a single two-level particle.
ComplexMatrix lowering();

// sigma^- on particle n (1-based) of N, identity elsewhere. Throws ConfigError
// for n outside 1..N or N outside 1..max_particles.
ComplexMatrix embed_lowering(int n, int num_particles);

// Bit mask of particle n (1-based) in a basis index for N particles.
constexpr std::size_t particle_bit(int n, int num_particles) {
    return std::size_t{1} << (num_particles - n);
}

// True when max|A - A^dagger| <= tol * max|A| entrywise (square matrices only).
bool is_hermitian(const ComplexMatrix& a, double tol = hermitian_tol);

// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending; each
// eigenvector is phase-normalized so its first non-negligible component is real
// positive, and exact-tie clusters are ordered lexicographically on those
// normalized components. Throws NumericalError on non-Hermitian input or when
// the solver does not converge.
HermitianSpectrum hermitian_eig(const ComplexMatrix& a);

// Real symmetric overload; eigenvectors are returned as real columns.
struct SymmetricSpectrum {
    RealVector eigenvalues;
    RealMatrix eigenvectors;
};
SymmetricSpectrum symmetric_eig(const RealMatrix& a);

// Column vector of the basis state with the given index.
ComplexVector basis_state(std::size_t dim, std::size_t index);

// |v><v|
ComplexMatrix projector(const ComplexVector& v);

} // namespace dfslab
