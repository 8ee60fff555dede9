#include "dfslab/atomic_ensemble.hpp"

#include "dfslab/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace dfslab {

namespace {

constexpr double unit_tol = 1e-12;
constexpr double mode_floor = 1e-12;

void require_full_size(int n, const char* what) {
    if (n > max_particles) {
        throw ConfigError(std::string(what) + ": " + std::to_string(n) +
                          " atoms exceeds the full-operator cap of " + std::to_string(max_particles));
    }
}

double nearest_distance(const RealVector& sorted, double value) {
    const auto* begin = sorted.data();
    const auto* end = begin + sorted.size();
    const auto* it = std::lower_bound(begin, end, value);
    double best = std::numeric_limits<double>::infinity();
    if (it != end) best = std::min(best, std::abs(*it - value));
    if (it != begin) best = std::min(best, std::abs(*(it - 1) - value));
    return best;
}

} // namespace

// ------------------------------ AtomConfiguration ------------------------------

AtomConfiguration::AtomConfiguration(std::vector<Vec3> positions, Vec3 dipole, double gamma0,
                                     bool dicke)
    : positions_(std::move(positions)), dipole_(std::move(dipole)), gamma0_(gamma0), dicke_(dicke) {
    if (positions_.empty()) throw ConfigError("AtomConfiguration: at least one atom is required");
    for (const auto& p : positions_) {
        if (!p.allFinite()) throw ConfigError("AtomConfiguration: non-finite position");
    }
    if (!dipole_.allFinite() || std::abs(dipole_.norm() - 1.0) > unit_tol) {
        throw ConfigError("AtomConfiguration: dipole must be a unit vector");
    }
    if (!(gamma0_ > 0.0) || !std::isfinite(gamma0_)) {
        throw ConfigError("AtomConfiguration: gamma0 must be positive");
    }
    if (!dicke_ && size() > 1 && !(min_separation() > 0.0)) {
        throw ConfigError("AtomConfiguration: coincident atoms require the Dicke flag");
    }
}

AtomConfiguration AtomConfiguration::dicke_limit(int n, Vec3 dipole, double gamma0) {
    if (n < 1) throw ConfigError("dicke_limit: n must be >= 1");
    return AtomConfiguration(std::vector<Vec3>(static_cast<std::size_t>(n), Vec3::Zero()),
                             std::move(dipole), gamma0, true);
}

double AtomConfiguration::min_separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < positions_.size(); ++j) {
        for (std::size_t k = j + 1; k < positions_.size(); ++k) {
            best = std::min(best, (positions_[j] - positions_[k]).norm());
        }
    }
    return best;
}

// ---------------------------------- couplings ----------------------------------

double gamma_jk(const Vec3& x, const Vec3& dipole) {
    const double r = x.norm();
    if (r < dicke_epsilon) return 1.0;
    const double c = dipole.dot(x) / (dipole.norm() * r);
    const double c2 = c * c;
    const double u = k0 * r;

    double sinc, bracket; // sin u / u and cos u / u^2 - sin u / u^3
    if (u < series_threshold) {
        // Taylor series in u^2, truncated well below double precision.
        const double u2 = u * u;
        double term = 1.0;
        sinc = 0.0;
        bracket = 0.0;
        for (int k = 0; k < 6; ++k) {
            // term = (-1)^k u^{2k} / (2k+1)!
            sinc += term;
            bracket -= term * 2.0 * (k + 1) / ((2.0 * k + 2) * (2.0 * k + 3));
            term *= -u2 / ((2.0 * k + 2) * (2.0 * k + 3));
        }
    } else {
        const double s = std::sin(u), co = std::cos(u);
        sinc = s / u;
        bracket = co / (u * u) - s / (u * u * u);
    }
    return 1.5 * ((1.0 - c2) * sinc + (1.0 - 3.0 * c2) * bracket);
}

RealMatrix reduced_matrix(const AtomConfiguration& config) {
    const int n = config.size();
    if (config.dicke()) return RealMatrix::Ones(n, n);
    RealMatrix out = RealMatrix::Identity(n, n);
    const auto& pos = config.positions();
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const double g = gamma_jk(pos[static_cast<std::size_t>(j)] - pos[static_cast<std::size_t>(k)],
                                      config.dipole());
            out(j, k) = g;
            out(k, j) = g;
        }
    }
    return out;
}

ComplexMatrix full_gamma(const AtomConfiguration& config) {
    const int n = config.size();
    require_full_size(n, "full_gamma");
    const RealMatrix gamma = config.gamma0() * reduced_matrix(config);
    const std::size_t dim = std::size_t{1} << n;

    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    // sigma_j^+ sigma_k |b>: lower atom k (must be excited), then raise atom j
    // (must be ground afterwards).
    for (std::size_t b = 0; b < dim; ++b) {
        for (int k = 1; k <= n; ++k) {
            const std::size_t bk = particle_bit(k, n);
            if (!(b & bk)) continue;
            const std::size_t lowered = b ^ bk;
            for (int j = 1; j <= n; ++j) {
                const std::size_t bj = particle_bit(j, n);
                if (lowered & bj) continue;
                out(static_cast<Eigen::Index>(lowered | bj), static_cast<Eigen::Index>(b)) +=
                    gamma(j - 1, k - 1);
            }
        }
    }
    return out;
}

LindbladModel atomic_model(const AtomConfiguration& config) {
    const int n = config.size();
    require_full_size(n, "atomic_model");
    const int dim = 1 << n;
    return atomic_model(config, ComplexMatrix::Zero(dim, dim));
}

LindbladModel atomic_model(const AtomConfiguration& config, ComplexMatrix h_eff) {
    const int n = config.size();
    require_full_size(n, "atomic_model");
    const int dim = 1 << n;

    std::vector<ComplexMatrix> sigmas;
    sigmas.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) sigmas.push_back(embed_lowering(k, n));

    const SymmetricSpectrum modes = symmetric_eig(reduced_matrix(config));
    std::vector<Jump> jumps;
    for (int m = 0; m < n; ++m) {
        const double mu = modes.eigenvalues(m);
        if (mu <= mode_floor) continue;
        ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
        for (int k = 0; k < n; ++k) op += modes.eigenvectors(k, m) * sigmas[static_cast<std::size_t>(k)];
        jumps.push_back({std::move(op), config.gamma0() * mu});
    }
    return LindbladModel(dim, std::move(jumps), std::move(h_eff));
}

ComplexMatrix excitation_number(int num_particles) {
    require_full_size(num_particles, "excitation_number");
    if (num_particles < 1) throw ConfigError("excitation_number: need at least one particle");
    const std::size_t dim = std::size_t{1} << num_particles;
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t b = 0; b < dim; ++b) {
        out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = static_cast<double>(std::popcount(b));
    }
    return out;
}

ComplexVector single_excitation_state(const ComplexVector& amplitudes) {
    const int n = static_cast<int>(amplitudes.size());
    require_full_size(n, "single_excitation_state");
    if (n < 1) throw ConfigError("single_excitation_state: empty amplitude vector");
    ComplexVector out = ComplexVector::Zero(Eigen::Index{1} << n);
    for (int l = 1; l <= n; ++l) out(static_cast<Eigen::Index>(particle_bit(l, n))) = amplitudes(l - 1);
    return out;
}

ComplexVector single_hole_state(const ComplexVector& amplitudes) {
    const int n = static_cast<int>(amplitudes.size());
    require_full_size(n, "single_hole_state");
    if (n < 1) throw ConfigError("single_hole_state: empty amplitude vector");
    const std::size_t all = (std::size_t{1} << n) - 1;
    ComplexVector out = ComplexVector::Zero(Eigen::Index{1} << n);
    for (int l = 1; l <= n; ++l) out(static_cast<Eigen::Index>(all ^ particle_bit(l, n))) = amplitudes(l - 1);
    return out;
}

// ---------------------------------- geometries ----------------------------------

AtomConfiguration line_config(int n, double spacing, LineOrientation orientation) {
    if (n < 1) throw ConfigError("line_config: n must be >= 1");
    if (!(spacing > 0.0)) throw ConfigError("line_config: spacing must be > 0");
    std::vector<Vec3> pos;
    for (int i = 0; i < n; ++i) pos.emplace_back(0.0, 0.0, i * spacing);
    return AtomConfiguration(std::move(pos),
                             orientation == LineOrientation::axial ? Vec3::UnitZ() : Vec3::UnitX());
}

AtomConfiguration square_config(double side) {
    if (!(side > 0.0)) throw ConfigError("square_config: side must be > 0");
    std::vector<Vec3> pos{{0.0, 0.0, 0.0}, {side, 0.0, 0.0}, {side, side, 0.0}, {0.0, side, 0.0}};
    return AtomConfiguration(std::move(pos), Vec3::UnitX());
}

AtomConfiguration ring_config(int n, double radius, RingOrientation orientation) {
    if (n < 2) throw ConfigError("ring_config: n must be >= 2");
    if (!(radius > 0.0)) throw ConfigError("ring_config: radius must be > 0");
    std::vector<Vec3> pos;
    for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / n;
        pos.emplace_back(radius * std::cos(phi), radius * std::sin(phi), 0.0);
    }
    return AtomConfiguration(std::move(pos),
                             orientation == RingOrientation::normal ? Vec3::UnitZ() : Vec3::UnitY());
}

// ------------------------------ spectrum relations ------------------------------

double ManifoldSpectraReport::max_error() const {
    double worst = 0.0;
    for (const auto& e : entries) {
        worst = std::max({worst, e.single_distance, e.hole_distance, e.single_residual, e.hole_residual});
    }
    return worst;
}

ManifoldSpectraReport verify_manifold_spectra(const AtomConfiguration& config, double tol) {
    const int n = config.size();
    require_full_size(n, "verify_manifold_spectra");
    const double g0 = config.gamma0();

    const ComplexMatrix gamma = full_gamma(config);
    ManifoldSpectraReport report;
    report.n = n;
    report.tol = tol;
    report.full_spectrum = hermitian_eig(gamma).eigenvalues;

    const SymmetricSpectrum reduced = symmetric_eig(reduced_matrix(config));
    for (int i = 0; i < n; ++i) {
        ManifoldSpectraEntry e;
        e.lambda = reduced.eigenvalues(i);
        const double single_value = g0 * e.lambda;
        const double hole_value = (n - 2 + e.lambda) * g0;
        e.single_distance = nearest_distance(report.full_spectrum, single_value);
        e.hole_distance = nearest_distance(report.full_spectrum, hole_value);

        const ComplexVector x = reduced.eigenvectors.col(i).cast<cplx>();
        const ComplexVector psi = single_excitation_state(x);
        const ComplexVector phi = single_hole_state(x);
        e.single_residual = (gamma * psi - single_value * psi).norm();
        e.hole_residual = (gamma * phi - hole_value * phi).norm();
        report.entries.push_back(e);
    }
    report.passed = report.max_error() <= tol;
    return report;
}

} // namespace dfslab
