#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lapflow/spectral.hpp"

namespace lapflow {

enum class FlowMethod { ExactExpm, Rk4Crosscheck };

/// Linear flow dx/dt = G x from x(0) = x0, sampled at t_grid.
struct FlowSpec {
    ComplexMatrix generator;
    ComplexVector x0;
    /// Strictly increasing, first element >= 0.
    std::vector<double> t_grid;
    FlowMethod method = FlowMethod::ExactExpm;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ComplexVector> states;
    /// States stop before the first sample whose norm exceeded kDivergenceLimit.
    bool diverged = false;
};

inline constexpr double kDivergenceLimit = 1e12;
inline constexpr double kConsensusTol = 1e-6;

/// Exact method: x(t_k) = expm(G (t_k - t_{k-1})) x(t_{k-1}), one
/// exponential per distinct step length. RK4: classical fourth order with
/// at least 100 substeps per grid interval.
Trajectory simulate(const FlowSpec& spec);

struct ConsensusReport {
    bool achieved = false;
    bool diverged = false;
    /// Mean of the final state (meaningful when achieved).
    Complex consensus_value;
    /// First sample time after which the spread stays <= tol; negative if none.
    double settling_time = -1.0;
    double spread_final = 0.0;
    ComplexVector final_state;
};

/// max_{i,j} |x_i - x_j|
double spread(const ComplexVector& x);

ConsensusReport detect_consensus(const Trajectory& traj, double tol_cons = kConsensusTol);

/// (z^H x0) / (z^H 1) for the left null vector z. Throws ContractError when
/// the bundle has no consensus limit (corank != 1 or an eigenvalue with
/// non-positive real part).
Complex predicted_consensus_value(const LaplacianBundle& bundle, const ComplexVector& x0);

/// Uniform grid of `samples` points on [0, t_max].
std::vector<double> uniform_grid(double t_max, Index samples);

/// dI/dt = -(1/inductance) L^+ I for the impedance-network Laplacian.
Trajectory impedance_flow(const LaplacianBundle& bundle, double shunt_inductance, const ComplexVector& i0,
                          const std::vector<double>& t_grid);

/// Writes "t,re_x0,im_x0,re_x1,im_x1,..." with 12 significant digits.
/// `preamble` lines (if any) are emitted first, each prefixed with "# ".
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& preamble = {});

}  // namespace lapflow
