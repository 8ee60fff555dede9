// atomic_ensemble.hpp — N two-level atoms sharing a dipole direction, coupled
// through the free-space radiation field.
//
// Units: lengths in resonant wavelengths (lambda0), rates in the single-atom
// decay rate gamma0, so k0 = 2*pi.

#pragma once

#include "dfslab/lindblad_model.hpp"
#include "dfslab/operator_core.hpp"

#include <numbers>
#include <vector>

namespace dfslab {

using Vec3 = Eigen::Vector3d;

inline constexpr double k0 = 2.0 * std::numbers::pi;

// Separations below this are treated as exact co-location (gamma_jk = 1).
inline constexpr double dicke_epsilon = 1e-8;

// Below this value of k0*|x| the trigonometric terms switch to their series.
inline constexpr double series_threshold = 0.1;

enum class LineOrientation { axial, transverse };
enum class RingOrientation { normal, tangential };

class AtomConfiguration {
public:
    // Throws ConfigError for an empty position list, a non-unit dipole
    // (1e-12), non-positive gamma0, or coincident atoms without the Dicke flag.
    AtomConfiguration(std::vector<Vec3> positions, Vec3 dipole, double gamma0 = 1.0,
                      bool dicke = false);

    // n co-located atoms (the Dicke limit).
    static AtomConfiguration dicke_limit(int n, Vec3 dipole = Vec3::UnitZ(), double gamma0 = 1.0);

    int size() const noexcept { return static_cast<int>(positions_.size()); }
    const std::vector<Vec3>& positions() const noexcept { return positions_; }
    const Vec3& dipole() const noexcept { return dipole_; }
    double gamma0() const noexcept { return gamma0_; }
    bool dicke() const noexcept { return dicke_; }

    double min_separation() const;

private:
    std::vector<Vec3> positions_;
    Vec3 dipole_;
    double gamma0_;
    bool dicke_;
};

// Collective decay coupling (gamma0 units) between two atoms separated by x,
// both with dipole direction `dipole`:
//   3/2 { [1 - c^2] sin u / u + [1 - 3c^2] (cos u / u^2 - sin u / u^3) }
// with u = k0 |x| and c the cosine between dipole and x.
double gamma_jk(const Vec3& x, const Vec3& dipole);

// N x N real symmetric matrix of gamma_jk with unit diagonal. A Dicke-flagged
// configuration yields the all-ones matrix regardless of positions.
RealMatrix reduced_matrix(const AtomConfiguration& config);

// Full 2^N x 2^N operator sum_{jk} gamma0 gamma_jk sigma_j^dagger sigma_k.
ComplexMatrix full_gamma(const AtomConfiguration& config);

// Canonical Lindblad form of the collective decay: diagonalize the reduced
// matrix as O diag(mu) O^T and emit J_m = sum_n O_nm sigma_n with rate
// gamma0 mu_m, dropping modes with mu_m <= 1e-12.
LindbladModel atomic_model(const AtomConfiguration& config);
LindbladModel atomic_model(const AtomConfiguration& config, ComplexMatrix h_eff);

// Total excitation sum_n sigma_n^dagger sigma_n (diagonal, 2^N x 2^N).
ComplexMatrix excitation_number(int num_particles);

// Embeds an N-vector of amplitudes into the single-excitation manifold
// (sum_l x_l |1,l>) or the single-hole manifold (sum_l x_l |0,l>).
ComplexVector single_excitation_state(const ComplexVector& amplitudes);
ComplexVector single_hole_state(const ComplexVector& amplitudes);

// ---------------------------------- geometries --------------------------------

// n atoms at (0, 0, (i-1) r); dipole z for axial, x for transverse.
AtomConfiguration line_config(int n, double spacing, LineOrientation orientation);

// Four atoms on the corners of a square of the given side in the xy-plane,
// dipole along x (parallel to two of the sides).
AtomConfiguration square_config(double side);

// n atoms equally spaced on a circle of the given radius in the xy-plane.
// Dipole along z for normal; for tangential the shared dipole is the tangent
// at the first atom (y).
AtomConfiguration ring_config(int n, double radius, RingOrientation orientation = RingOrientation::normal);

// -------------------------- reduced/full spectrum checks ------------------------

struct ManifoldSpectraEntry {
    double lambda{0.0};               // reduced eigenvalue
    double single_distance{0.0};      // min |gamma0 lambda - spec(Gamma)|
    double hole_distance{0.0};        // min |(N - 2 + lambda) gamma0 - spec(Gamma)|
    double single_residual{0.0};      // ||Gamma psi - gamma0 lambda psi||, psi = sum x_l |1,l>
    double hole_residual{0.0};        // ||Gamma phi - (N-2+lambda) gamma0 phi||, phi = sum x_l |0,l>
};

struct ManifoldSpectraReport {
    int n{0};
    double tol{0.0};
    RealVector full_spectrum;
    std::vector<ManifoldSpectraEntry> entries;
    bool passed{false};
    double max_error() const;
};

// Checks that every reduced eigenpair yields the predicted eigenvalues and
// eigenvectors of the full decoherence operator, within tol.
ManifoldSpectraReport verify_manifold_spectra(const AtomConfiguration& config, double tol = 1e-9);

} // namespace dfslab
