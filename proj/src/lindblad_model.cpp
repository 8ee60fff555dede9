#include "dfslab/lindblad_model.hpp"

#include "dfslab/errors.hpp"

#include <cmath>
#include <string>

namespace dfslab {

namespace {

constexpr double state_hermitian_tol = 1e-10;
constexpr double state_trace_tol = 1e-8;
constexpr double state_positivity_tol = 1e-10;
constexpr double norm_tol = 1e-10;

void require_square(const ComplexMatrix& m, int dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw ConfigError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                          std::to_string(dim) + " operator, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
    }
}

bool strictly_triangular(const ComplexMatrix& j) {
    bool upper = true, lower = true;
    for (Eigen::Index c = 0; c < j.cols() && (upper || lower); ++c) {
        for (Eigen::Index r = 0; r < j.rows(); ++r) {
            if (j(r, c) == cplx{}) continue;
            if (r >= c) upper = false;
            if (r <= c) lower = false;
        }
    }
    return upper || lower;
}

void check_state_dim(const LindbladModel& model, const ComplexVector& psi, const char* what) {
    if (psi.size() != model.dim()) throw ConfigError(std::string(what) + ": state dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > norm_tol) throw ConfigError(std::string(what) + ": state is not normalized");
}

} // namespace

// ------------------------------- LindbladModel -------------------------------

LindbladModel::LindbladModel(int dim, std::vector<Jump> jumps)
    : LindbladModel(dim, std::move(jumps), ComplexMatrix::Zero(dim, dim)) {}

LindbladModel::LindbladModel(int dim, std::vector<Jump> jumps, ComplexMatrix h_eff)
    : dim_(dim), jumps_(std::move(jumps)), h_eff_(std::move(h_eff)) {
    if (dim_ < 1) throw ConfigError("LindbladModel: dimension must be >= 1");
    for (const auto& j : jumps_) {
        if (!(j.rate > 0.0) || !std::isfinite(j.rate)) {
            throw ConfigError("LindbladModel: jump rates must be finite and > 0");
        }
        require_square(j.op, dim_, "LindbladModel jump");
    }
    require_square(h_eff_, dim_, "LindbladModel h_eff");
    if (!is_hermitian(h_eff_)) throw ConfigError("LindbladModel: h_eff is not Hermitian");
    has_hamiltonian_ = !h_eff_.isZero(0.0);

    Sparse gamma(dim_, dim_);
    for (const auto& j : jumps_) {
        Sparse op = j.op.sparseView(cplx{}, 0.0);
        op.makeCompressed();
        Sparse adj = op.adjoint();
        gamma += j.rate * (adj * op);
        sparse_jumps_.push_back(std::move(op));
        sparse_adjoint_.push_back(std::move(adj));
    }
    // Exact Hermiticity; the products above agree only to rounding.
    sparse_gamma_ = 0.5 * (gamma + Sparse(gamma.adjoint()));
    sparse_gamma_.makeCompressed();
    gamma_ = ComplexMatrix(sparse_gamma_);
}

LindbladModel LindbladModel::with_hamiltonian(ComplexMatrix h_eff) const {
    return LindbladModel(dim_, jumps_, std::move(h_eff));
}

// ------------------------------- DensityMatrix -------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
        throw ConfigError("DensityMatrix: matrix must be square and non-empty");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > state_hermitian_tol) {
        throw ConfigError("DensityMatrix: not Hermitian");
    }
    if (std::abs(rho_.trace() - cplx{1.0}) > state_trace_tol) {
        throw ConfigError("DensityMatrix: trace differs from 1");
    }
    const ComplexMatrix sym = 0.5 * (rho_ + rho_.adjoint());
    if (hermitian_eig(sym).eigenvalues(0) < -state_positivity_tol) {
        throw ConfigError("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
    if (std::abs(psi.norm() - 1.0) > norm_tol) throw ConfigError("DensityMatrix::pure: state is not normalized");
    return DensityMatrix(projector(psi));
}

// --------------------------------- generators --------------------------------

ComplexMatrix decoherence_operator(const LindbladModel& model) { return model.gamma(); }

ComplexMatrix dissipator(const LindbladModel& model, const ComplexMatrix& rho) {
    require_square(rho, model.dim(), "dissipator");
    // 1/2([J rho, J^+] + [J, rho J^+]) = J rho J^+ - 1/2 {J^+ J, rho}
    const auto& ops = model.sparse_jumps();
    const auto& adj = model.sparse_jumps_adjoint();
    ComplexMatrix out = -0.5 * (model.sparse_gamma() * rho);
    out.noalias() -= 0.5 * (rho * model.sparse_gamma());
    ComplexMatrix jr(model.dim(), model.dim());
    for (std::size_t l = 0; l < ops.size(); ++l) {
        jr.noalias() = ops[l] * rho;
        out.noalias() += model.jumps()[l].rate * (jr * adj[l]);
    }
    return out;
}

ComplexMatrix dissipator(const LindbladModel& model, const DensityMatrix& rho) {
    return dissipator(model, rho.matrix());
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho) {
    const cplx minus_i{0.0, -1.0};
    ComplexMatrix out = dissipator(model, rho);
    if (!model.has_hamiltonian()) return out;
    out.noalias() += minus_i * (model.h_eff() * rho);
    out.noalias() -= minus_i * (rho * model.h_eff());
    return out;
}

bool check_nilpotent(const ComplexMatrix& j, double tol) {
    if (j.rows() != j.cols()) throw ConfigError("check_nilpotent: matrix must be square");
    const double norm = j.norm();
    if (norm == 0.0 || strictly_triangular(j)) return true;
    // Power traces of J / ||J||_F keep every term O(1).
    const ComplexMatrix scaled = j / norm;
    ComplexMatrix power = scaled;
    for (Eigen::Index m = 1; m <= j.rows(); ++m) {
        if (std::abs(power.trace()) > tol) return false;
        if (m < j.rows()) power = power * scaled;
    }
    return true;
}

// ------------------------------------ IPDFS ----------------------------------

PureStateCondition verify_pure_state_condition(const LindbladModel& model, const ComplexVector& psi, double tol) {
    check_state_dim(model, psi, "verify_pure_state_condition");
    PureStateCondition out;
    double coupling = 0.0;
    for (const auto& j : model.jumps()) {
        const ComplexVector jpsi = j.op * psi;
        const cplx c = psi.dot(jpsi);
        out.coeffs.push_back(c);
        out.g += j.rate * std::norm(c);
        out.max_jump_residual = std::max(out.max_jump_residual, (jpsi - c * psi).norm());
        coupling += j.rate * (2.0 * j.op.norm() + tol);
    }
    const ComplexMatrix gamma = decoherence_operator(model);
    out.gamma_residual = (gamma * psi - out.g * psi).norm();
    out.holds = out.max_jump_residual <= tol && out.gamma_residual <= tol;

    // If J psi = c psi + e and Gamma psi = g psi + f, then
    // ||L_D[psi psi^+]||_F <= sum_l rate_l (2|c_l| ||e_l|| + ||e_l||^2) + ||f||.
    out.dissipator_norm = dissipator(model, projector(psi)).norm();
    out.dissipator_tol = tol * (1.0 + coupling);
    out.consistent = out.holds == (out.dissipator_norm <= out.dissipator_tol);
    return out;
}

DFSReport find_ipdfs(const LindbladModel& model, double tol_kernel) {
    DFSReport report;
    const ComplexMatrix gamma = decoherence_operator(model);
    report.gamma_norm = gamma.norm();
    for (const auto& j : model.jumps()) {
        if (!check_nilpotent(j.op)) {
            report.nilpotent_jumps = false;
            break;
        }
    }

    const HermitianSpectrum spec = hermitian_eig(gamma);
    const double threshold = tol_kernel * report.gamma_norm;
    std::vector<Eigen::Index> picked;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (report.nilpotent_jumps) {
            if (std::abs(spec.eigenvalues(i)) <= threshold) picked.push_back(i);
        } else {
            const ComplexVector v = spec.eigenvectors.col(i);
            if (verify_pure_state_condition(model, v, std::max(threshold, 1e-7)).holds) picked.push_back(i);
        }
    }

    const auto k = static_cast<Eigen::Index>(picked.size());
    const auto n_jumps = static_cast<Eigen::Index>(model.jumps().size());
    report.kernel_dim = static_cast<int>(k);
    report.basis.resize(model.dim(), k);
    report.jump_residuals.resize(n_jumps, k);
    report.eigen_coeffs.resize(n_jumps, k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const ComplexVector v = spec.eigenvectors.col(picked[static_cast<std::size_t>(c)]);
        report.basis.col(c) = v;
        report.gamma_residuals.push_back((gamma * v).norm());
        double g = 0.0;
        for (Eigen::Index l = 0; l < n_jumps; ++l) {
            const auto& j = model.jumps()[static_cast<std::size_t>(l)];
            const ComplexVector jv = j.op * v;
            report.jump_residuals(l, c) = jv.norm();
            report.eigen_coeffs(l, c) = v.dot(jv);
            g += j.rate * std::norm(report.eigen_coeffs(l, c));
        }
        report.g.push_back(g);
        report.dissipator_norms.push_back(dissipator(model, projector(v)).norm());
    }

    if (report.nilpotent_jumps) {
        for (double d : report.dissipator_norms) {
            if (d > 10.0 * threshold) {
                throw NumericalError("find_ipdfs: kernel vector is not stationary under L_D");
            }
        }
    }
    return report;
}

double hamiltonian_leakage(const LindbladModel& model, const DFSReport& report) {
    if (report.basis.rows() != model.dim()) throw ConfigError("hamiltonian_leakage: dimension mismatch");
    const ComplexMatrix p = report.basis * report.basis.adjoint();
    const ComplexMatrix id = ComplexMatrix::Identity(model.dim(), model.dim());
    return ((id - p) * model.h_eff() * p).norm();
}

ImplicationResult verify_stationary_implies_dissipation_free(const LindbladModel& model, const ComplexVector& psi,
                                    const ComplexMatrix& delta, double tol) {
    check_state_dim(model, psi, "verify_stationary_implies_dissipation_free");
    require_square(delta, model.dim(), "verify_stationary_implies_dissipation_free delta");
    if (!is_hermitian(delta)) throw ConfigError("verify_stationary_implies_dissipation_free: delta is not Hermitian");

    const ComplexMatrix rho = projector(psi);
    const ComplexMatrix ld = dissipator(model, rho);
    const cplx minus_i{0.0, -1.0};
    const ComplexMatrix stationary = minus_i * (delta * rho - rho * delta) + ld;

    ImplicationResult out;
    out.stationary_norm = stationary.norm();
    out.dissipator_norm = ld.norm();
    out.antecedent = out.stationary_norm <= tol;
    out.consequent = out.dissipator_norm <= 10.0 * tol;
    out.held = !out.antecedent || out.consequent;
    return out;
}

} // namespace dfslab
