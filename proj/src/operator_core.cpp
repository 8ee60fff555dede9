#include "dfslab/operator_core.hpp"

#include "dfslab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace dfslab {

namespace {

// Components below this magnitude (unit-norm vectors) do not fix the phase.
constexpr double phase_floor = 1e-10;

// Eigenvalues closer than this (relative to the spectral scale) count as tied.
constexpr double tie_tol = 1e-12;

template <typename Vec>
void normalize_phase(Vec&& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > phase_floor) {
            if constexpr (std::is_same_v<typename std::decay_t<Vec>::Scalar, cplx>) {
                v *= std::conj(v(i)) / mag;
            } else {
                if (v(i) < 0.0) v = -v;
            }
            return;
        }
    }
}

template <typename Vec>
bool lexicographic_less(const Vec& a, const Vec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double ar = std::real(a(i)), br = std::real(b(i));
        if (ar != br) return ar < br;
        const double ai = std::imag(a(i)), bi = std::imag(b(i));
        if (ai != bi) return ai < bi;
    }
    return false;
}

// Applies the deterministic ordering contract to a solver's output in place.
template <typename Mat>
void canonicalize(RealVector& values, Mat& vectors) {
    const Eigen::Index n = values.size();
    for (Eigen::Index i = 0; i < n; ++i) normalize_phase(vectors.col(i));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });

    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t stop = start + 1;
        while (stop < order.size() &&
               values(order[stop]) - values(order[stop - 1]) <= tie_tol * scale) {
            ++stop;
        }
        if (stop - start > 1) {
            std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(stop),
                             [&](Eigen::Index a, Eigen::Index b) {
                                 return lexicographic_less(vectors.col(a), vectors.col(b));
                             });
        }
        start = stop;
    }

    RealVector sorted_values(n);
    Mat sorted_vectors(vectors.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sorted_values(i) = values(order[static_cast<std::size_t>(i)]);
        sorted_vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
    }
    values = std::move(sorted_values);
    vectors = std::move(sorted_vectors);
}

} // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix lowering() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 1) = 1.0; // |g><e|
    return s;
}

ComplexMatrix embed_lowering(int n, int num_particles) {
    if (num_particles < 1 || num_particles > max_particles) {
        throw ConfigError("embed_lowering: particle count " + std::to_string(num_particles) +
                          " outside 1.." + std::to_string(max_particles));
    }
    if (n < 1 || n > num_particles) {
        throw ConfigError("embed_lowering: particle index " + std::to_string(n) +
                          " outside 1.." + std::to_string(num_particles));
    }
    // Direct construction; equal to I^(n-1) (x) sigma^- (x) I^(N-n).
    const std::size_t dim = std::size_t{1} << num_particles;
    const std::size_t bit = particle_bit(n, num_particles);
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
    for (std::size_t b = 0; b < dim; ++b) {
        if (b & bit) out(static_cast<Eigen::Index>(b ^ bit), static_cast<Eigen::Index>(b)) = 1.0;
    }
    return out;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = a.cwiseAbs().maxCoeff();
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    return dev <= tol * scale;
}

HermitianSpectrum hermitian_eig(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw NumericalError("hermitian_eig: matrix must be square and non-empty");
    }
    if (!is_hermitian(a)) {
        throw NumericalError("hermitian_eig: input is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eig: eigensolver did not converge");
    }
    HermitianSpectrum out{solver.eigenvalues(), solver.eigenvectors()};
    canonicalize(out.eigenvalues, out.eigenvectors);
    return out;
}

SymmetricSpectrum symmetric_eig(const RealMatrix& a) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw NumericalError("symmetric_eig: matrix must be square and non-empty");
    }
    const double scale = a.cwiseAbs().maxCoeff();
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > hermitian_tol * scale) {
        throw NumericalError("symmetric_eig: input is not symmetric within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric_eig: eigensolver did not converge");
    }
    SymmetricSpectrum out{solver.eigenvalues(), solver.eigenvectors()};
    canonicalize(out.eigenvalues, out.eigenvectors);
    return out;
}

ComplexVector basis_state(std::size_t dim, std::size_t index) {
    if (index >= dim) throw ConfigError("basis_state: index out of range");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

ComplexMatrix projector(const ComplexVector& v) {
    return v * v.adjoint();
}

} // namespace dfslab
