#include "dfslab/evolution.hpp"

#include "dfslab/errors.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace dfslab {

namespace {

ComplexMatrix default_observable(int dim) {
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    if (!std::has_single_bit(static_cast<unsigned>(dim))) return out;
    for (int b = 0; b < dim; ++b) out(b, b) = static_cast<double>(std::popcount(static_cast<unsigned>(b)));
    return out;
}

} // namespace

double stiffness(const LindbladModel& model, double dt) {
    double scale = model.h_eff().norm();
    for (const auto& j : model.jumps()) scale += j.rate * j.op.squaredNorm();
    return dt * scale;
}

EvolutionResult evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final,
                       double dt, const EvolveOptions& options) {
    if (rho0.dim() != model.dim()) throw ConfigError("evolve: state and model dimensions differ");
    if (!(dt > 0.0) || !(t_final >= 0.0)) throw ConfigError("evolve: need dt > 0 and t_final >= 0");
    if (options.stride < 1) throw ConfigError("evolve: stride must be >= 1");
    const double s = stiffness(model, dt);
    if (s > stability_bound) {
        throw StabilityError("evolve: dt * (||H||_F + sum rate ||J||_F^2) = " + std::to_string(s) +
                             " exceeds " + std::to_string(stability_bound));
    }
    const ComplexMatrix observable = options.population_observable.value_or(default_observable(model.dim()));
    if (observable.rows() != model.dim() || observable.cols() != model.dim()) {
        throw ConfigError("evolve: observable dimension mismatch");
    }

    const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    EvolutionResult out;
    ComplexMatrix rho = rho0.matrix();

    auto record = [&](double t) {
        out.times.push_back(t);
        out.excited_population.push_back(std::real((rho * observable).trace()));
        out.purity.push_back(std::real((rho * rho).trace()));
    };
    auto track_trace = [&] {
        out.trace_drift = std::max(out.trace_drift, std::abs(rho.trace() - cplx{1.0}));
    };

    record(0.0);
    track_trace();
    for (long i = 1; i <= steps; ++i) {
        const ComplexMatrix k1 = lindblad_rhs(model, rho);
        const ComplexMatrix k2 = lindblad_rhs(model, rho + (0.5 * dt) * k1);
        const ComplexMatrix k3 = lindblad_rhs(model, rho + (0.5 * dt) * k2);
        const ComplexMatrix k4 = lindblad_rhs(model, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        track_trace();
        if (i % options.stride == 0 || i == steps) record(static_cast<double>(i) * dt);
    }
    out.final_state = std::move(rho);
    return out;
}

double fit_decay_rate(const EvolutionResult& result, std::pair<double, double> window) {
    const auto [lo, hi] = window;
    if (!(lo < hi)) throw ConfigError("fit_decay_rate: empty window");
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        const double t = result.times[i];
        if (t < lo || t > hi) continue;
        const double p = result.excited_population[i];
        if (!(p > 0.0)) throw ConfigError("fit_decay_rate: non-positive population in window");
        ts.push_back(t);
        ys.push_back(std::log(p));
    }
    if (ts.size() < 2) throw ConfigError("fit_decay_rate: fewer than two samples in window");

    const double n = static_cast<double>(ts.size());
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= n;
    ym /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxy += (ts[i] - tm) * (ys[i] - ym);
        sxx += (ts[i] - tm) * (ts[i] - tm);
    }
    return -sxy / sxx;
}

std::pair<double, double> default_fit_window(const EvolutionResult& result) {
    if (result.times.size() < 2) throw ConfigError("default_fit_window: need at least two samples");
    const double t_first = result.times.front();
    const double t_last = result.times.back();
    const double p0 = result.excited_population[0];
    const double p1 = result.excited_population[1];
    double estimate = 0.0;
    if (p0 > 0.0 && p1 > 0.0) estimate = -std::log(p1 / p0) / (result.times[1] - t_first);
    if (!(estimate > 1e-12) || !std::isfinite(estimate)) return {t_first, t_last};
    const double lo = std::max(t_first, 0.1 / estimate);
    const double hi = std::min(t_last, 1.0 / estimate);
    if (!(lo < hi)) return {t_first, t_last};
    return {lo, hi};
}

} // namespace dfslab
