#pragma once

// Product Hamiltonians on A_R x T^{2n} built from radial profiles, plus sampled
// grids and time blends for inputs outside the closed-form families.

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hamcap/phase_space.hpp"
#include "hamcap/profiles.hpp"

namespace hamcap {

/// Phase velocity X_H(x). dq = dH/dp, dp = -dH/dq.
struct VectorFieldValue {
    double dp0 = 0.0;
    double dq0 = 0.0;
    std::vector<double> dp;
    std::vector<double> dq;

    State toState() const;
    static VectorFieldValue fromState(std::span<const double> v);
};

/// Multilinear grid over (p0, p1, ..., pn) with optional q-Fourier modulation:
///   H(p, q) = G(p) * (1 + sum_j eps_j cos(2 pi k_j . q + phi_j)).
/// The p0 axis covers [-R, R] uniformly; each torus axis p_i covers one period
/// [-1, 1) uniformly and wraps around.
struct SampledGrid {
    struct Mode {
        std::vector<int> k; // wave vector over (q0, q1, ..., qn)
        double amplitude = 0.0;
        double phase = 0.0;
    };
    std::vector<int> shape;     // n+1 axis sizes; shape[0] >= 2, shape[i] >= 1
    std::vector<double> values; // row-major, p0 slowest
    std::vector<Mode> modes;
};

class ProductHamiltonian {
public:
    enum class Form { OuterRadial, ThreeChart, SampledGrid, TimeBlend };
    enum class Chart { Bump, Upper, Lower, Middle };

    /// H = f(p0 / scale). scale = R for normalized profiles, 1 for raw ones.
    static ProductHamiltonian outerRadial(const PhaseSpaceConfig &geometry, RadialProfile profile, double scale);
    /// Outer radial form with the scale implied by the profile domain.
    static ProductHamiltonian outerRadial(const PhaseSpaceConfig &geometry, RadialProfile profile);
    /// Four-case Hamiltonian built from an inner plateau profile with level s.
    /// Throws InvalidConfig when |s| < 1 or the chart seams disagree.
    static ProductHamiltonian threeChart(const PhaseSpaceConfig &geometry, RadialProfile profile, double s);
    static ProductHamiltonian sampledGrid(const PhaseSpaceConfig &geometry, SampledGrid grid);
    /// One-periodic time dependence: H_t = sum_j w_j(t) H_j with smooth normalized
    /// periodic weights peaked at t = j / m.
    static ProductHamiltonian timeBlend(const PhaseSpaceConfig &geometry, std::vector<ProductHamiltonian> snapshots);
    static ProductHamiltonian zero(const PhaseSpaceConfig &geometry);

    Form form() const noexcept { return form_; }
    const PhaseSpaceConfig &geometry() const noexcept { return geometry_; }
    int n() const noexcept { return geometry_.n(); }
    bool qIndependent() const noexcept;
    bool autonomous() const noexcept { return form_ != Form::TimeBlend; }
    bool radial() const noexcept { return form_ == Form::OuterRadial || form_ == Form::ThreeChart; }

    /// Radial data; null for grid and blend forms.
    const RadialProfile *profile() const noexcept { return profile_ ? profile_.get() : nullptr; }
    double radialScale() const noexcept { return scale_; }
    double plateauLevel() const noexcept { return s_; }

    // Hot-path evaluation on flat states [p0..pn, q0..qn].
    double value(const double *x, double t = 0.0) const;
    /// Writes X_H into out (size 2n+2). Throws SingularPoint at p = u-bar when the
    /// bump-chart field has no continuous extension.
    void field(const double *x, double t, double *out) const;

    double evalH(const PhasePoint &x, double t = 0.0) const;
    VectorFieldValue hamiltonianVectorField(const PhasePoint &x, double t = 0.0) const;

    /// Chart selected by the dispatch rules (three-chart form only).
    Chart chartOf(const double *x) const;
    /// Evaluates one chart formula regardless of the dispatch region.
    double evalChart(Chart chart, const double *x) const;

    /// Largest |H| on a collar grid |p0| >= R - collar (compact support check).
    double boundaryCollarMax(double collar, int samples = 64) const;

    const std::vector<ProductHamiltonian> &snapshots() const noexcept { return *snapshots_; }
    const SampledGrid &grid() const noexcept { return *grid_; }

private:
    explicit ProductHamiltonian(const PhaseSpaceConfig &geometry) : geometry_(geometry) {}

    double gridBase(const double *p) const;
    double gridModulation(const double *q) const;
    void gridModulationGradient(const double *q, double *grad) const;
    double blendWeight(std::size_t j, double t) const;

    Form form_ = Form::OuterRadial;
    PhaseSpaceConfig geometry_;
    std::shared_ptr<const RadialProfile> profile_;
    double scale_ = 1.0;
    double s_ = 0.0;
    std::shared_ptr<const SampledGrid> grid_;
    std::shared_ptr<const std::vector<ProductHamiltonian>> snapshots_;
};

/// Infimum of H over [0,1] x L_u x T^n = {p0 = u, p_i = 0}. Exact for
/// q-independent autonomous forms; a grid minimum over q (and t) otherwise.
double infOverMarkedSet(const ProductHamiltonian &H, int qSamples = 16, int tSamples = 16);

} // namespace hamcap
