#pragma once

// Numeric periodic orbits: implicit-midpoint flow, time-one map, shooting in a
// homotopy class, loop actions, and parallel seed sweeps.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamcap/hamiltonians.hpp"
#include "hamcap/orbit_analysis.hpp"
#include "hamcap/phase_space.hpp"

namespace hamcap {

struct IntegratorConfig {
    int stepCount = 512; // implicit-midpoint steps per unit time
    double newtonTol = 1e-12;
    int newtonMaxIter = 50;

    /// Throws InvalidConfig when stepCount < 16 or the tolerances are not positive.
    void validate() const;
};

/// Shooting residual accepted as a periodic orbit.
inline constexpr double kShootingTol = 1e-9;
/// Singular values below this count towards the kernel of d(phi^1) - id.
inline constexpr double kKernelThreshold = 1e-4;

struct Trajectory {
    std::vector<double> times;
    std::vector<State> points; // lifted, no modular wrapping
};

/// Integrates X_H over [0, 1]. Throws NewtonDivergence if an implicit step fails.
Trajectory integrateFlow(const ProductHamiltonian &H, const PhasePoint &x0, const IntegratorConfig &config = {});
/// Lifted endpoint phi^1(x0) without storing the trajectory.
State timeOneMap(const ProductHamiltonian &H, const State &x0, const IntegratorConfig &config = {});
/// Central finite-difference Jacobian of the time-one map.
Eigen::MatrixXd timeOneJacobian(const ProductHamiltonian &H, const State &x0, const IntegratorConfig &config = {},
                                double step = 1e-6);

enum class ShootingStatus {
    Converged,
    SingularJacobian,
    LineSearchFailed,
    MaxIterations,
    WrongWinding,
    IntegrationFailed // the flow hit a singular point or an implicit step diverged
};

const char *statusName(ShootingStatus status) noexcept;

struct ShootingResult {
    LoopSample orbit{{}, {}, HomotopyClass(0, 1)};
    double level = 0.0;  // mean p0
    double action = 0.0; // loopAction of the orbit
    double residual = 0.0;
    bool converged = false;
    ShootingStatus status = ShootingStatus::MaxIterations;
    int iterations = 0;
};

/// Damped Newton on G(x) = phi^1(x) - x - ell e_{q0} with a finite-difference
/// Jacobian and SVD least-squares steps. Never throws for non-convergence.
ShootingResult shootPeriodicOrbit(const ProductHamiltonian &H, const HomotopyClass &cls, const PhasePoint &seed,
                                  const IntegratorConfig &config = {});

/// int H dt - oint p dq by trapezoidal quadrature on the lifted loop. The
/// reference loop is p = 0, q0 = ell t, so constant-p orbits give H - p0 ell.
double loopAction(const ProductHamiltonian &H, const LoopSample &loop);

/// Number of singular values of d(phi^1) - id at x below kKernelThreshold.
int kernelDimension(const ProductHamiltonian &H, const State &x, const IntegratorConfig &config = {});

// ---------------------------------------------------------------------------
// Seed sweeps

/// Seed for random sweeps: HAMCAP_SEED when set, otherwise `fallback`.
std::uint64_t rngSeedFromEnvironment(std::uint64_t fallback = 20240611);

/// Lattice over (p0, p1..pn) at q = 0: p0 at cell centres of (-R, R); the torus
/// momenta are all zero or +-1/2 along a single axis. q-dependent inputs also
/// cycle q0 over quarters.
std::vector<PhasePoint> seedLattice(const ProductHamiltonian &H, int count);
/// Uniform seeds over (-R, R) x [0,1) x ([-1,1) x [0,1))^n.
std::vector<PhasePoint> randomSeeds(const PhaseSpaceConfig &geometry, int count, std::uint64_t seed);

struct SweepEntry {
    std::size_t seed = 0;
    bool converged = false;
    ShootingStatus status = ShootingStatus::MaxIterations;
    double level = 0.0;
    double action = 0.0;
    double residual = 0.0;
    std::vector<int> winding;
    int kernelDim = -1; // -1 when not computed
    State start;        // converged orbit start (lifted)
};

struct SweepOptions {
    IntegratorConfig integrator;
    bool kernel = true; // compute the kernel dimension of converged orbits
    int threads = 0;    // 0: hardware concurrency
};

/// Shoots from every seed in parallel; entries are returned in seed order.
std::vector<SweepEntry> shootingSweep(const ProductHamiltonian &H, const HomotopyClass &cls,
                                      const std::vector<PhasePoint> &seeds, const SweepOptions &options = {});

struct OrbitCluster {
    double level = 0.0;
    double action = 0.0;
    int kernelDim = -1;
    std::size_t count = 0;
    std::size_t seed = 0; // representative seed index
};

/// Groups converged entries whose levels lie within `tolerance`, ascending by level.
std::vector<OrbitCluster> clusterOrbits(const std::vector<SweepEntry> &entries, double tolerance = 1e-4);

/// Numeric class-0 orbits below this action are treated as part of the flat,
/// non-positive continuum (they converge where f' < kShootingTol but f > 0).
inline constexpr double kContractibleActionFloor = 1e-6;

struct OracleComparison {
    std::vector<OrbitCluster> clusters; // numeric clusters inside the action window
    std::size_t matched = 0;
    std::vector<std::size_t> missing; // family indices without a numeric cluster
    std::vector<OrbitCluster> extra;  // clusters without an analytic family
    double worstLevelError = 0.0;
    double worstActionError = 0.0;
    std::size_t kernelMismatches = 0; // matched clusters whose kernel dimension differs from the family's
    double tolerance = 1e-6;

    bool pass() const noexcept;
};

/// Matches sweep clusters to analytic families by level. Class 0 only keeps
/// clusters with action above kContractibleActionFloor.
OracleComparison compareWithAnalytic(const std::vector<PeriodicOrbitFamily> &families,
                                     const std::vector<SweepEntry> &entries, const HomotopyClass &cls,
                                     double tolerance = 1e-6);

} // namespace hamcap
