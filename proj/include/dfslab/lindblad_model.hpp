// lindblad_model.hpp — Lindblad open systems, decoherence operator, and
// instantaneous pure decoherence-free state (IPDFS) detection

#pragma once

#include "dfslab/operator_core.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace dfslab {

struct Jump {
    ComplexMatrix op;
    double rate{0.0};
};

// Open system  d rho/dt = -i[H_eff, rho] + L_D[rho]  with hbar = 1.
// Invariants (checked at construction): every rate > 0, all operators dim x dim,
// h_eff Hermitian.
class LindbladModel {
public:
    LindbladModel(int dim, std::vector<Jump> jumps);
    LindbladModel(int dim, std::vector<Jump> jumps, ComplexMatrix h_eff);

    int dim() const noexcept { return dim_; }
    const std::vector<Jump>& jumps() const noexcept { return jumps_; }
    const ComplexMatrix& h_eff() const noexcept { return h_eff_; }

    // Copy of this model with a different effective Hamiltonian.
    LindbladModel with_hamiltonian(ComplexMatrix h_eff) const;

    // Sparse copies built once at construction; the generators below use them.
    using Sparse = Eigen::SparseMatrix<cplx>;
    const std::vector<Sparse>& sparse_jumps() const noexcept { return sparse_jumps_; }
    const std::vector<Sparse>& sparse_jumps_adjoint() const noexcept { return sparse_adjoint_; }
    const Sparse& sparse_gamma() const noexcept { return sparse_gamma_; }
    const ComplexMatrix& gamma() const noexcept { return gamma_; }
    bool has_hamiltonian() const noexcept { return has_hamiltonian_; }

private:
    int dim_;
    std::vector<Jump> jumps_;
    ComplexMatrix h_eff_;
    std::vector<Sparse> sparse_jumps_;
    std::vector<Sparse> sparse_adjoint_;
    Sparse sparse_gamma_;
    ComplexMatrix gamma_;
    bool has_hamiltonian_{false};
};

// Validated density matrix: Hermitian within 1e-10, unit trace within 1e-8,
// eigenvalues >= -1e-10.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix rho);

    static DensityMatrix pure(const ComplexVector& psi);

    const ComplexMatrix& matrix() const noexcept { return rho_; }
    int dim() const noexcept { return static_cast<int>(rho_.rows()); }

private:
    ComplexMatrix rho_;
};

inline constexpr double default_kernel_tol = 1e-10;

// Gamma = sum_l rate_l J_l^dagger J_l
ComplexMatrix decoherence_operator(const LindbladModel& model);

// L_D[rho] = 1/2 sum_l rate_l ([J_l rho, J_l^dagger] + [J_l, rho J_l^dagger]).
// Accepts any dim x dim operator (not only valid states).
ComplexMatrix dissipator(const LindbladModel& model, const ComplexMatrix& rho);
ComplexMatrix dissipator(const LindbladModel& model, const DensityMatrix& rho);

// Full generator -i[H_eff, rho] + L_D[rho].
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho);

// True iff |Tr(J^m)| <= tol * ||J||_F^m for m = 1..dim.
bool check_nilpotent(const ComplexMatrix& j, double tol = 1e-10);

struct DFSReport {
    int kernel_dim{0};
    ComplexMatrix basis;                    // orthonormal columns
    std::vector<double> gamma_residuals;    // ||Gamma v||_2 per vector
    RealMatrix jump_residuals;              // (l, vector) -> ||J_l v||_2
    ComplexMatrix eigen_coeffs;             // (l, vector) -> c_l = v^dagger J_l v
    std::vector<double> g;                  // sum_l rate_l |c_l|^2 per vector
    std::vector<double> dissipator_norms;   // ||L_D[v v^dagger]||_F per vector
    double gamma_norm{0.0};                 // ||Gamma||_F
    bool nilpotent_jumps{true};             // false: found by the general fallback scan
};

// Kernel of Gamma (relative threshold tol_kernel * ||Gamma||_F). With nilpotent
// jumps this is exactly the IPDFS; otherwise Gamma eigenvectors are screened
// with verify_pure_state_condition and nilpotent_jumps is reported false.
DFSReport find_ipdfs(const LindbladModel& model, double tol_kernel = default_kernel_tol);

// ||(1 - P) H_eff P||_F for the projector P onto the report's basis. Zero means
// the IPDFS is also invariant under the Hamiltonian part (a true DFS).
double hamiltonian_leakage(const LindbladModel& model, const DFSReport& report);

struct PureStateCondition {
    bool holds{false};                // every J_l psi = c_l psi and Gamma psi = g psi within tol
    std::vector<cplx> coeffs;         // c_l = psi^dagger J_l psi
    double g{0.0};                    // sum_l rate_l |c_l|^2
    double max_jump_residual{0.0};    // max_l ||J_l psi - c_l psi||
    double gamma_residual{0.0};       // ||Gamma psi - g psi||
    double dissipator_norm{0.0};      // ||L_D[psi psi^dagger]||_F
    double dissipator_tol{0.0};       // threshold the dissipator norm is compared with
    bool consistent{false};           // holds == (dissipator_norm <= dissipator_tol)
};

// Pure-state decoherence-free criterion. Throws ConfigError if psi is not
// normalized (1e-10) or has the wrong dimension.
PureStateCondition verify_pure_state_condition(const LindbladModel& model, const ComplexVector& psi, double tol = 1e-7);

struct ImplicationResult {
    bool antecedent{false};   // ||-i[Delta, rho] + L_D[rho]||_F <= tol
    bool consequent{false};   // ||L_D[rho]||_F <= 10 tol
    bool held{false};         // !antecedent || consequent
    double stationary_norm{0.0};
    double dissipator_norm{0.0};
};

// For a pure state rho = psi psi^dagger and a Hermitian shift Delta, checks
// that stationarity under -i[Delta, .] + L_D forces L_D[rho] = 0.
ImplicationResult verify_stationary_implies_dissipation_free(const LindbladModel& model, const ComplexVector& psi,
                                    const ComplexMatrix& delta, double tol = 1e-9);

} // namespace dfslab
