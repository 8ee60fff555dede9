// verification.hpp — numerical witnesses: linear independence of plane waves on
// the resonant sphere, strict positivity of collective decay away from the Dicke
// limit, and convergence toward it.

#pragma once

#include "dfslab/atomic_ensemble.hpp"

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace dfslab {

using Monomial = std::array<int, 3>; // exponents of (k_x, k_y, k_z)

inline constexpr double default_rank_tol = 1e-8;
inline constexpr int samples_per_function = 16;

struct GramReport {
    int n_functions{0};
    int n_samples{0};
    std::vector<double> singular_values; // descending
    int rank_at_tol{0};
};

// Deterministic quasi-uniform points on the sphere |k| = radius (Fibonacci lattice).
std::vector<Vec3> fibonacci_sphere(int n_samples, double radius);

// Rank of F[s][j] = P_j(k_s) exp(i k_s . x_j) over Fibonacci samples k_s on the
// sphere |k| = k_radius. P_j = 1 unless `degrees` supplies one monomial per
// position. rank_at_tol counts singular values above tol * sigma_max.
// Throws ConfigError when n_samples < 4 * n_functions.
GramReport gram_rank_check(const std::vector<Vec3>& positions, double k_radius, int n_samples,
                           const std::optional<std::vector<Monomial>>& degrees = std::nullopt,
                           double tol = default_rank_tol);

// Smallest eigenvalue of the reduced decay matrix: the slowest single-excitation
// decay rate (gamma0 units). Throws ConfigError for Dicke-flagged configurations.
double min_nontrivial_eigenvalue(const AtomConfiguration& config);

using GeometryFamily = std::function<AtomConfiguration(double)>;

struct DickeRow {
    double r{0.0};
    double min_eigenvalue{0.0};
};

struct DickeTable {
    std::vector<DickeRow> rows;
    bool all_positive{false};
    bool monotone{false}; // min_eigenvalue non-increasing as r decreases
};

// Tabulates min_nontrivial_eigenvalue along a geometry family for strictly
// decreasing positive r_values. Throws ConfigError otherwise.
DickeTable dicke_convergence(const GeometryFamily& family, const std::vector<double>& r_values);

// Uniform random positions in [0, box]^3 with every pairwise distance >= min_sep
// (rejection sampling) and a uniformly random unit dipole.
AtomConfiguration random_configuration(std::mt19937_64& rng, int n, double box, double min_sep);

} // namespace dfslab
