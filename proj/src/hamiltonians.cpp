#include "hamcap/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hamcap/errors.hpp"

namespace hamcap {

State VectorFieldValue::toState() const
{
    PhasePoint tmp{dp0, dq0, dp, dq};
    return tmp.toState();
}

VectorFieldValue VectorFieldValue::fromState(std::span<const double> v)
{
    const auto p = PhasePoint::fromState(v);
    return {p.p0, p.q0, p.p, p.q};
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSeamTol = 1e-9;
constexpr double kBlendSharpness = 2.0;

} // namespace

ProductHamiltonian ProductHamiltonian::outerRadial(const PhaseSpaceConfig &geometry, RadialProfile profile, double scale)
{
    if (!(scale > 0.0)) {
        throw InvalidConfig("radial scale must be positive");
    }
    ProductHamiltonian H(geometry);
    H.form_ = Form::OuterRadial;
    H.profile_ = std::make_shared<const RadialProfile>(std::move(profile));
    H.scale_ = scale;
    return H;
}

ProductHamiltonian ProductHamiltonian::outerRadial(const PhaseSpaceConfig &geometry, RadialProfile profile)
{
    const double scale = profile.domain() == ProfileDomain::Normalized ? geometry.R() : 1.0;
    return outerRadial(geometry, std::move(profile), scale);
}

ProductHamiltonian ProductHamiltonian::threeChart(const PhaseSpaceConfig &geometry, RadialProfile profile, double s)
{
    if (std::abs(s) < 1.0) {
        throw InvalidConfig("three-chart Hamiltonians need |s| >= 1");
    }
    const auto seam = profile.eval(0.5);
    if (std::abs(seam.f - s) > kSeamTol || std::abs(seam.df) > kSeamTol) {
        throw InvalidConfig("chart seam mismatch: f(1/2) = " + std::to_string(seam.f) +
                            ", f'(1/2) = " + std::to_string(seam.df) + ", s = " + std::to_string(s));
    }
    ProductHamiltonian H(geometry);
    H.form_ = Form::ThreeChart;
    H.profile_ = std::make_shared<const RadialProfile>(std::move(profile));
    H.s_ = s;
    return H;
}

ProductHamiltonian ProductHamiltonian::sampledGrid(const PhaseSpaceConfig &geometry, SampledGrid grid)
{
    const int n = geometry.n();
    if (grid.shape.size() != static_cast<std::size_t>(n + 1)) {
        throw InvalidConfig("grid needs one axis per momentum p0..pn");
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < grid.shape.size(); ++i) {
        if (grid.shape[i] < (i == 0 ? 2 : 1)) {
            throw InvalidConfig("grid axis too small");
        }
        total *= static_cast<std::size_t>(grid.shape[i]);
    }
    if (grid.values.size() != total) {
        throw InvalidConfig("grid value count does not match its shape");
    }
    for (const auto &mode : grid.modes) {
        if (mode.k.size() != static_cast<std::size_t>(n + 1)) {
            throw InvalidConfig("Fourier mode needs a wave vector over q0..qn");
        }
    }
    ProductHamiltonian H(geometry);
    H.form_ = Form::SampledGrid;
    H.grid_ = std::make_shared<const SampledGrid>(std::move(grid));
    return H;
}

ProductHamiltonian ProductHamiltonian::timeBlend(const PhaseSpaceConfig &geometry,
                                                 std::vector<ProductHamiltonian> snapshots)
{
    if (snapshots.empty()) {
        throw InvalidConfig("time blend needs at least one snapshot");
    }
    for (const auto &h : snapshots) {
        if (!(h.geometry() == geometry) || !h.autonomous()) {
            throw InvalidConfig("time blend snapshots must be autonomous and share the geometry");
        }
    }
    ProductHamiltonian H(geometry);
    H.form_ = Form::TimeBlend;
    H.snapshots_ = std::make_shared<const std::vector<ProductHamiltonian>>(std::move(snapshots));
    return H;
}

ProductHamiltonian ProductHamiltonian::zero(const PhaseSpaceConfig &geometry)
{
    RadialProfile flat({0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, true, ProfileDomain::Normalized, -1.0, 1.0);
    return outerRadial(geometry, std::move(flat));
}

bool ProductHamiltonian::qIndependent() const noexcept
{
    switch (form_) {
    case Form::OuterRadial:
    case Form::ThreeChart:
        return true;
    case Form::SampledGrid:
        return grid_->modes.empty();
    case Form::TimeBlend:
        return std::all_of(snapshots_->begin(), snapshots_->end(),
                           [](const ProductHamiltonian &h) { return h.qIndependent(); });
    }
    return false;
}

// ---------------------------------------------------------------------------
// Three-chart dispatch

ProductHamiltonian::Chart ProductHamiltonian::chartOf(const double *x) const
{
    const int n = geometry_.n();
    const double u = geometry_.u();
    const double R = geometry_.R();
    double d2 = (x[0] - u) * (x[0] - u);
    for (int i = 1; i <= n; ++i) {
        const double pi = centeredRepresentative(x[i], kTorusMomentumPeriod);
        d2 += pi * pi;
    }
    const double half = 0.5 * geometry_.mu();
    if (d2 <= half * half) {
        return Chart::Bump;
    }
    const double edge = 0.5 * (R + std::abs(u));
    if (x[0] >= edge) {
        return Chart::Upper;
    }
    if (x[0] <= -edge) {
        return Chart::Lower;
    }
    return Chart::Middle;
}

double ProductHamiltonian::evalChart(Chart chart, const double *x) const
{
    const int n = geometry_.n();
    const double u = geometry_.u();
    const double au = std::abs(u);
    const double R = geometry_.R();
    switch (chart) {
    case Chart::Bump: {
        double d2 = (x[0] - u) * (x[0] - u);
        for (int i = 1; i <= n; ++i) {
            const double pi = centeredRepresentative(x[i], kTorusMomentumPeriod);
            d2 += pi * pi;
        }
        return profile_->value(std::sqrt(d2) / geometry_.mu());
    }
    case Chart::Upper:
        return profile_->value((x[0] - au) / (R - au));
    case Chart::Lower:
        return profile_->value((x[0] + au) / (R - au));
    case Chart::Middle:
        return s_;
    }
    return s_;
}

// ---------------------------------------------------------------------------
// Sampled grid

double ProductHamiltonian::gridBase(const double *p) const
{
    const auto &g = *grid_;
    const int dims = static_cast<int>(g.shape.size());
    const double R = geometry_.R();
    std::vector<std::size_t> lo(static_cast<std::size_t>(dims));
    std::vector<std::size_t> hi(static_cast<std::size_t>(dims));
    std::vector<double> frac(static_cast<std::size_t>(dims));
    {
        const double n0 = static_cast<double>(g.shape[0] - 1);
        double u = (p[0] + R) / (2.0 * R) * n0;
        u = std::clamp(u, 0.0, n0);
        double i0 = std::floor(u);
        if (i0 >= n0) {
            i0 = n0 - 1.0;
        }
        lo[0] = static_cast<std::size_t>(i0);
        hi[0] = lo[0] + 1;
        frac[0] = u - i0;
    }
    for (int a = 1; a < dims; ++a) {
        const auto na = static_cast<std::size_t>(g.shape[static_cast<std::size_t>(a)]);
        const double u = wrapToPeriod(p[a] + 1.0, kTorusMomentumPeriod) / kTorusMomentumPeriod * static_cast<double>(na);
        double ia = std::floor(u);
        frac[static_cast<std::size_t>(a)] = u - ia;
        lo[static_cast<std::size_t>(a)] = static_cast<std::size_t>(ia) % na;
        hi[static_cast<std::size_t>(a)] = (lo[static_cast<std::size_t>(a)] + 1) % na;
    }
    double out = 0.0;
    for (std::uint32_t corner = 0; corner < (1u << dims); ++corner) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int a = 0; a < dims; ++a) {
            const bool up = (corner >> a) & 1u;
            const auto ua = static_cast<std::size_t>(a);
            w *= up ? frac[ua] : 1.0 - frac[ua];
            flat = flat * static_cast<std::size_t>(g.shape[ua]) + (up ? hi[ua] : lo[ua]);
        }
        if (w != 0.0) {
            out += w * g.values[flat];
        }
    }
    return out;
}

double ProductHamiltonian::gridModulation(const double *q) const
{
    double m = 1.0;
    for (const auto &mode : grid_->modes) {
        double phase = mode.phase;
        for (std::size_t i = 0; i < mode.k.size(); ++i) {
            phase += kTwoPi * mode.k[i] * q[i];
        }
        m += mode.amplitude * std::cos(phase);
    }
    return m;
}

void ProductHamiltonian::gridModulationGradient(const double *q, double *grad) const
{
    const std::size_t m = static_cast<std::size_t>(geometry_.n() + 1);
    std::fill(grad, grad + m, 0.0);
    for (const auto &mode : grid_->modes) {
        double phase = mode.phase;
        for (std::size_t i = 0; i < m; ++i) {
            phase += kTwoPi * mode.k[i] * q[i];
        }
        const double sn = std::sin(phase);
        for (std::size_t i = 0; i < m; ++i) {
            grad[i] -= mode.amplitude * sn * kTwoPi * mode.k[i];
        }
    }
}

double ProductHamiltonian::blendWeight(std::size_t j, double t) const
{
    const double m = static_cast<double>(snapshots_->size());
    double total = 0.0;
    double mine = 0.0;
    for (std::size_t k = 0; k < snapshots_->size(); ++k) {
        const double w = std::exp(kBlendSharpness * std::cos(kTwoPi * (t - static_cast<double>(k) / m)));
        total += w;
        if (k == j) {
            mine = w;
        }
    }
    return mine / total;
}

// ---------------------------------------------------------------------------
// Evaluation

double ProductHamiltonian::value(const double *x, double t) const
{
    switch (form_) {
    case Form::OuterRadial:
        return profile_->value(x[0] / scale_);
    case Form::ThreeChart:
        return evalChart(chartOf(x), x);
    case Form::SampledGrid:
        return gridBase(x) * gridModulation(x + geometry_.n() + 1);
    case Form::TimeBlend: {
        double h = 0.0;
        for (std::size_t j = 0; j < snapshots_->size(); ++j) {
            h += blendWeight(j, t) * (*snapshots_)[j].value(x, t);
        }
        return h;
    }
    }
    return 0.0;
}

void ProductHamiltonian::field(const double *x, double t, double *out) const
{
    const int n = geometry_.n();
    const std::size_t dim = static_cast<std::size_t>(2 * n + 2);
    std::fill(out, out + dim, 0.0);
    double *dq = out + n + 1;
    switch (form_) {
    case Form::OuterRadial:
        dq[0] = profile_->slope(x[0] / scale_) / scale_;
        return;
    case Form::ThreeChart: {
        const double u = geometry_.u();
        const double au = std::abs(u);
        const double R = geometry_.R();
        switch (chartOf(x)) {
        case Chart::Bump: {
            const double mu = geometry_.mu();
            auto diff = [&](int i) { return (i == 0) ? x[0] - u : centeredRepresentative(x[i], kTorusMomentumPeriod); };
            double d2 = 0.0;
            for (int i = 0; i <= n; ++i) {
                d2 += diff(i) * diff(i);
            }
            const double d = std::sqrt(d2);
            const double slope = profile_->slope(d / mu);
            if (d == 0.0) {
                if (slope != 0.0) {
                    throw SingularPoint("radial field undefined at p = u-bar since f'(0) != 0");
                }
                return;
            }
            for (int i = 0; i <= n; ++i) {
                dq[i] = slope / mu * diff(i) / d;
            }
            return;
        }
        case Chart::Upper:
            dq[0] = profile_->slope((x[0] - au) / (R - au)) / (R - au);
            return;
        case Chart::Lower:
            dq[0] = profile_->slope((x[0] + au) / (R - au)) / (R - au);
            return;
        case Chart::Middle:
            return;
        }
        return;
    }
    case Form::SampledGrid: {
        const double *q = x + n + 1;
        const double mod = gridModulation(q);
        std::vector<double> p(x, x + n + 1);
        // Richardson-extrapolated central differences of the interpolant in p.
        constexpr double h = 1e-6;
        for (int i = 0; i <= n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            auto central = [&](double step) {
                p[ui] = x[i] + step;
                const double up = gridBase(p.data());
                p[ui] = x[i] - step;
                const double down = gridBase(p.data());
                p[ui] = x[i];
                return (up - down) / (2.0 * step);
            };
            const double coarse = central(h);
            const double fine = central(0.5 * h);
            dq[i] = (4.0 * fine - coarse) / 3.0 * mod;
        }
        if (!grid_->modes.empty()) {
            std::vector<double> grad(static_cast<std::size_t>(n + 1));
            gridModulationGradient(q, grad.data());
            const double base = gridBase(x);
            for (int i = 0; i <= n; ++i) {
                out[i] = -base * grad[static_cast<std::size_t>(i)];
            }
        }
        return;
    }
    case Form::TimeBlend: {
        std::vector<double> tmp(dim);
        for (std::size_t j = 0; j < snapshots_->size(); ++j) {
            const double w = blendWeight(j, t);
            (*snapshots_)[j].field(x, t, tmp.data());
            for (std::size_t k = 0; k < dim; ++k) {
                out[k] += w * tmp[k];
            }
        }
        return;
    }
    }
}

double ProductHamiltonian::evalH(const PhasePoint &x, double t) const
{
    const State s = x.toState();
    return value(s.data(), t);
}

VectorFieldValue ProductHamiltonian::hamiltonianVectorField(const PhasePoint &x, double t) const
{
    const State s = x.toState();
    State out(s.size());
    field(s.data(), t, out.data());
    return VectorFieldValue::fromState(out);
}

double ProductHamiltonian::boundaryCollarMax(double collar, int samples) const
{
    const int n = geometry_.n();
    const double R = geometry_.R();
    State x(static_cast<std::size_t>(2 * n + 2), 0.0);
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double depth = collar * (static_cast<double>(j) + 0.5) / samples;
        for (double sign : {-1.0, 1.0}) {
            x[0] = sign * (R - depth);
            for (int k = 0; k < 4; ++k) {
                for (int i = 1; i <= n; ++i) {
                    x[static_cast<std::size_t>(i)] = -1.0 + 0.5 * k + 0.1 * i;
                    x[qIndex(n, i)] = 0.25 * k;
                }
                x[qIndex(n, 0)] = 0.125 * k;
                worst = std::max(worst, std::abs(value(x.data(), 0.25 * k)));
            }
        }
    }
    return worst;
}

double infOverMarkedSet(const ProductHamiltonian &H, int qSamples, int tSamples)
{
    const auto &g = H.geometry();
    const int n = g.n();
    State x(static_cast<std::size_t>(2 * n + 2), 0.0);
    x[0] = g.u();
    if (H.qIndependent() && H.autonomous()) {
        return H.value(x.data(), 0.0);
    }
    const int tCount = H.autonomous() ? 1 : tSamples;
    const int qCount = H.qIndependent() ? 1 : qSamples;
    std::size_t total = 1;
    for (int i = 0; i <= n; ++i) {
        total *= static_cast<std::size_t>(qCount);
    }
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < tCount; ++it) {
        const double t = static_cast<double>(it) / tCount;
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rest = idx;
            for (int i = 0; i <= n; ++i) {
                x[qIndex(n, i)] = static_cast<double>(rest % static_cast<std::size_t>(qCount)) / qCount;
                rest /= static_cast<std::size_t>(qCount);
            }
            best = std::min(best, H.value(x.data(), t));
        }
    }
    return best;
}

} // namespace hamcap
