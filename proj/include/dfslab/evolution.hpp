// evolution.hpp — fixed-step RK4 integration of the master equation

#pragma once

#include "dfslab/lindblad_model.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace dfslab {

inline constexpr double default_dt = 1e-3;

// dt * (||H_eff||_F + sum_l rate_l ||J_l||_F^2) must not exceed this.
inline constexpr double stability_bound = 0.05;

struct EvolutionResult {
    std::vector<double> times;
    std::vector<double> excited_population; // Tr(rho N_exc)
    std::vector<double> purity;             // Tr(rho^2)
    double trace_drift{0.0};                // max |Tr rho - 1| over the run
    ComplexMatrix final_state;
};

struct EvolveOptions {
    // Observable reported as excited_population; defaults to the excitation
    // number sum_n sigma_n^+ sigma_n when dim is a power of two, else zero.
    std::optional<ComplexMatrix> population_observable;
    // Record every `stride`-th step (the final time is always recorded).
    int stride{1};
};

// Stability measure dt * (||H_eff||_F + sum_l rate_l ||J_l||_F^2).
double stiffness(const LindbladModel& model, double dt);

// Integrates d rho/dt = -i[H_eff, rho] + L_D[rho] from 0 to t_final with the
// classical 4th-order Runge-Kutta scheme. No trace renormalization is applied.
// Throws StabilityError when the guard is violated, ConfigError on bad input.
EvolutionResult evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final,
                       double dt = default_dt, const EvolveOptions& options = {});

// Decay rate from a least-squares fit of log(population) on [t_begin, t_end].
// Throws ConfigError when the window holds fewer than two samples or a
// non-positive population.
double fit_decay_rate(const EvolutionResult& result, std::pair<double, double> window);

// Window [0.1, 1.0] / rate_estimate, with the estimate taken from the first
// two samples and the window clipped to the recorded range.
std::pair<double, double> default_fit_window(const EvolutionResult& result);

} // namespace dfslab
