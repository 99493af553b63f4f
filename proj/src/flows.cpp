#include "lapflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>

namespace lapflow {

namespace {

bool finite_and_bounded(const ComplexVector& x) {
    for (Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x(i).real()) || !std::isfinite(x(i).imag())) return false;
    return x.norm() <= kDivergenceLimit;
}

void validate(const FlowSpec& spec) {
    require_square(spec.generator, "simulate");
    if (spec.x0.size() != spec.generator.rows())
        throw ContractError("simulate: x0 has length " + std::to_string(spec.x0.size()) + ", generator is " +
                            std::to_string(spec.generator.rows()) + "x" + std::to_string(spec.generator.cols()));
    if (spec.t_grid.empty()) throw ContractError("simulate: empty time grid");
    if (!(spec.t_grid.front() >= 0.0)) throw ContractError("simulate: time grid must start at t >= 0");
    for (std::size_t k = 1; k < spec.t_grid.size(); ++k)
        if (!(spec.t_grid[k] > spec.t_grid[k - 1]))
            throw ContractError("simulate: time grid must be strictly increasing");
}

ComplexVector rk4(const ComplexMatrix& g, ComplexVector x, double dt) {
    if (dt == 0.0) return x;
    const double gnorm = g.cwiseAbs().rowwise().sum().maxCoeff();
    const auto steps = static_cast<long>(std::max(100.0, std::ceil(dt * gnorm / 0.5)));
    const double h = dt / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
        const ComplexVector k1 = g * x;
        const ComplexVector k2 = g * (x + 0.5 * h * k1);
        const ComplexVector k3 = g * (x + 0.5 * h * k2);
        const ComplexVector k4 = g * (x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!finite_and_bounded(x)) return x;
    }
    return x;
}

}  // namespace

Trajectory simulate(const FlowSpec& spec) {
    validate(spec);
    Trajectory traj;
    // Propagators keyed by step length quantized to 1e-12 of the horizon,
    // so a uniform grid needs one or two exponentials.
    std::map<long long, ComplexMatrix> propagators;
    const double horizon = std::max(spec.t_grid.back(), 1e-300);
    ComplexVector x = spec.x0;
    double t_prev = 0.0;
    for (double t : spec.t_grid) {
        const double dt = t - t_prev;
        ComplexVector next;
        if (spec.method == FlowMethod::Rk4Crosscheck) {
            next = rk4(spec.generator, x, dt);
        } else {
            const long long key = std::llround(dt / horizon * 1e12);
            auto it = propagators.find(key);
            if (it == propagators.end()) {
                try {
                    it = propagators.emplace(key, expm(spec.generator * dt)).first;
                } catch (const SaturationError&) {
                    traj.diverged = true;
                    break;
                }
            }
            next = it->second * x;
        }
        if (!finite_and_bounded(next)) {
            traj.diverged = true;
            break;
        }
        x = std::move(next);
        traj.times.push_back(t);
        traj.states.push_back(x);
        t_prev = t;
    }
    return traj;
}

double spread(const ComplexVector& x) {
    double s = 0.0;
    for (Index i = 0; i < x.size(); ++i)
        for (Index j = i + 1; j < x.size(); ++j) s = std::max(s, std::abs(x(i) - x(j)));
    return s;
}

ConsensusReport detect_consensus(const Trajectory& traj, double tol_cons) {
    ConsensusReport r;
    r.diverged = traj.diverged;
    if (traj.states.empty()) return r;
    r.final_state = traj.states.back();
    r.spread_final = spread(r.final_state);
    r.consensus_value = r.final_state.mean();

    std::optional<std::size_t> first_below;
    bool stayed = true;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const bool below = spread(traj.states[k]) <= tol_cons;
        if (!first_below) {
            if (below) first_below = k;
        } else if (!below) {
            stayed = false;
        }
    }
    if (first_below && stayed) r.settling_time = traj.times[*first_below];
    r.achieved = !traj.diverged && first_below.has_value() && stayed;
    return r;
}

Complex predicted_consensus_value(const LaplacianBundle& b, const ComplexVector& x0) {
    if (x0.size() != b.L.rows()) throw ContractError("predicted_consensus_value: x0 has the wrong length");
    if (b.corank != 1)
        throw ContractError("predicted_consensus_value: corank is " + std::to_string(b.corank) +
                            "; no single consensus limit");
    const double bound = kZeroTol * norm(b.L);
    for (std::size_t i = 1; i < b.spectrum.eigenvalues.size(); ++i)
        if (!(b.spectrum.eigenvalues[i].real() > bound))
            throw ContractError("predicted_consensus_value: eigenvalue with non-positive real part; flow does not settle");
    const ComplexVector one = ComplexVector::Ones(x0.size());
    return b.left_null.dot(x0) / b.left_null.dot(one);
}

std::vector<double> uniform_grid(double t_max, Index samples) {
    if (!(t_max > 0.0) || samples < 2) throw ContractError("uniform_grid: need t_max > 0 and at least 2 samples");
    std::vector<double> grid(static_cast<std::size_t>(samples));
    for (Index k = 0; k < samples; ++k)
        grid[static_cast<std::size_t>(k)] = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    return grid;
}

Trajectory impedance_flow(const LaplacianBundle& b, double shunt_inductance, const ComplexVector& i0,
                          const std::vector<double>& t_grid) {
    if (!(shunt_inductance > 0.0)) throw ContractError("impedance_flow: shunt inductance must be positive");
    return simulate({-b.L_pinv / shunt_inductance, i0, t_grid, FlowMethod::ExactExpm});
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) os << "# " << line << '\n';
    const Index n = traj.states.empty() ? 0 : traj.states.front().size();
    os << 't';
    for (Index i = 0; i < n; ++i) os << ",re_x" << i << ",im_x" << i;
    os << '\n';
    char buf[32];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        os << buf;
    };
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        put(traj.times[k]);
        for (Index i = 0; i < n; ++i) {
            os << ',';
            put(traj.states[k](i).real());
            os << ',';
            put(traj.states[k](i).imag());
        }
        os << '\n';
    }
}

}  // namespace lapflow
