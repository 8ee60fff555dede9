#include "dfslab/verification.hpp"

#include "dfslab/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>

namespace dfslab {

std::vector<Vec3> fibonacci_sphere(int n_samples, double radius) {
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n_samples;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * i;
        out.emplace_back(radius * rho * std::cos(phi), radius * rho * std::sin(phi), radius * z);
    }
    return out;
}

GramReport gram_rank_check(const std::vector<Vec3>& positions, double k_radius, int n_samples,
                           const std::optional<std::vector<Monomial>>& degrees, double tol) {
    const int n_functions = static_cast<int>(positions.size());
    if (n_functions < 1) throw ConfigError("gram_rank_check: no positions");
    if (!(k_radius > 0.0)) throw ConfigError("gram_rank_check: k_radius must be > 0");
    if (n_samples < 4 * n_functions) throw ConfigError("gram_rank_check: need n_samples >= 4 * n_functions");
    if (degrees && static_cast<int>(degrees->size()) != n_functions) {
        throw ConfigError("gram_rank_check: one monomial per position is required");
    }

    const auto ks = fibonacci_sphere(n_samples, k_radius);
    ComplexMatrix f(n_samples, n_functions);
    for (int s = 0; s < n_samples; ++s) {
        const Vec3& k = ks[static_cast<std::size_t>(s)];
        for (int j = 0; j < n_functions; ++j) {
            double poly = 1.0;
            if (degrees) {
                const Monomial& m = (*degrees)[static_cast<std::size_t>(j)];
                poly = std::pow(k.x(), m[0]) * std::pow(k.y(), m[1]) * std::pow(k.z(), m[2]);
            }
            f(s, j) = poly * std::exp(cplx{0.0, k.dot(positions[static_cast<std::size_t>(j)])});
        }
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(f);
    GramReport report;
    report.n_functions = n_functions;
    report.n_samples = n_samples;
    const RealVector& sv = svd.singularValues();
    report.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double cutoff = tol * (sv.size() > 0 ? sv(0) : 0.0);
    for (double s : report.singular_values) {
        if (s > cutoff) ++report.rank_at_tol;
    }
    return report;
}

double min_nontrivial_eigenvalue(const AtomConfiguration& config) {
    if (config.dicke()) {
        throw ConfigError("min_nontrivial_eigenvalue: Dicke-limit configurations are excluded");
    }
    return symmetric_eig(reduced_matrix(config)).eigenvalues(0);
}

DickeTable dicke_convergence(const GeometryFamily& family, const std::vector<double>& r_values) {
    if (r_values.empty()) throw ConfigError("dicke_convergence: no r values");
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        if (!(r_values[i] > 0.0)) throw ConfigError("dicke_convergence: r values must be positive");
        if (i > 0 && !(r_values[i] < r_values[i - 1])) {
            throw ConfigError("dicke_convergence: r values must be strictly decreasing");
        }
    }
    DickeTable table;
    table.all_positive = true;
    table.monotone = true;
    for (double r : r_values) {
        const double value = min_nontrivial_eigenvalue(family(r));
        if (!(value > 0.0)) table.all_positive = false;
        if (!table.rows.empty() && value > table.rows.back().min_eigenvalue) table.monotone = false;
        table.rows.push_back({r, value});
    }
    return table;
}

AtomConfiguration random_configuration(std::mt19937_64& rng, int n, double box, double min_sep) {
    if (n < 1) throw ConfigError("random_configuration: n must be >= 1");
    std::uniform_real_distribution<double> coord(0.0, box);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<Vec3> pos;
    int attempts = 0;
    while (static_cast<int>(pos.size()) < n) {
        if (++attempts > 100000) throw ConfigError("random_configuration: box too small for min_sep");
        const Vec3 candidate(coord(rng), coord(rng), coord(rng));
        bool ok = true;
        for (const auto& p : pos) {
            if ((p - candidate).norm() < min_sep) {
                ok = false;
                break;
            }
        }
        if (ok) pos.push_back(candidate);
    }
    Vec3 d;
    do {
        d = Vec3(normal(rng), normal(rng), normal(rng));
    } while (d.norm() < 1e-6);
    return AtomConfiguration(std::move(pos), d.normalized());
}

} // namespace dfslab
