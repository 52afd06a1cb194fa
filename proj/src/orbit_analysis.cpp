#include "hamcap/orbit_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "hamcap/errors.hpp"
#include "hamcap/profiles.hpp"

namespace hamcap {

const char *kindName(OrbitKind kind) noexcept
{
    switch (kind) {
    case OrbitKind::P:
        return "P";
    case OrbitKind::Q:
        return "Q";
    case OrbitKind::Rfam:
        return "R";
    case OrbitKind::Contractible:
        return "contractible";
    }
    return "?";
}

namespace {

// Collects the roots of f'(r) = slope on [lo, hi] as families with p0 = offset + scale * r.
void collect(std::vector<PeriodicOrbitFamily> &out, const RadialProfile &f, OrbitKind kind, int dimension,
             double slope, double lo, double hi, double offset, double scale, int ell)
{
    if (!(lo < hi)) {
        return;
    }
    const auto roots = solveSlope(f, slope, lo, hi);
    for (const auto &root : roots.roots) {
        PeriodicOrbitFamily fam;
        fam.kind = ell == 0 ? OrbitKind::Contractible : kind;
        fam.radialRoot = root.r;
        fam.level = offset + scale * root.r;
        fam.dimension = dimension;
        fam.profileValue = f.value(root.r);
        fam.action = fam.profileValue - fam.level * ell;
        fam.morseBott = !root.degenerate();
        fam.secondDerivativeSign = root.secondDerivativeSign;
        fam.continuum = std::any_of(roots.flats.begin(), roots.flats.end(), [&](const auto &flat) {
            return std::abs(0.5 * (flat.first + flat.second) - root.r) <= 1e-12;
        });
        if (ell == 0 && !(fam.action > 0.0)) {
            continue;
        }
        out.push_back(fam);
    }
}

} // namespace

std::vector<PeriodicOrbitFamily> enumerateFamilies(const ProductHamiltonian &H, const HomotopyClass &cls)
{
    if (!H.radial()) {
        throw NotRadial("analytic enumeration needs an outer radial or three-chart Hamiltonian");
    }
    const auto &g = H.geometry();
    if (cls.n() != g.n()) {
        throw WrongClass("class dimension does not match the phase space");
    }
    const int n = g.n();
    const int ell = cls.ell;
    const auto &f = *H.profile();
    std::vector<PeriodicOrbitFamily> out;

    if (H.form() == ProductHamiltonian::Form::OuterRadial) {
        const double scale = H.radialScale();
        const double lo = std::max(f.domainLo(), -g.R() / scale);
        const double hi = std::min(f.domainHi(), g.R() / scale);
        collect(out, f, OrbitKind::P, 2 * n + 1, scale * ell, lo, hi, 0.0, scale, ell);
        // The open annulus excludes |p0| = R.
        std::erase_if(out, [&](const PeriodicOrbitFamily &fam) { return std::abs(fam.level) >= g.R(); });
    } else {
        const double au = std::abs(g.u());
        const double width = g.R() - au;
        collect(out, f, OrbitKind::Q, n + 1, g.mu() * ell, -0.5, 0.5, g.u(), g.mu(), ell);
        collect(out, f, OrbitKind::Rfam, 2 * n + 1, width * ell, 0.5, 1.0, au, width, ell);
        collect(out, f, OrbitKind::Rfam, 2 * n + 1, width * ell, -1.0, -0.5, -au, width, ell);
        std::erase_if(out, [&](const PeriodicOrbitFamily &fam) { return std::abs(fam.level) >= g.R(); });
    }
    std::sort(out.begin(), out.end(), [](const PeriodicOrbitFamily &a, const PeriodicOrbitFamily &b) {
        return a.level < b.level;
    });
    return out;
}

double actionOfFamily(const PeriodicOrbitFamily &family, double profileValue, const PhaseSpaceConfig &,
                      const HomotopyClass &cls)
{
    return profileValue - family.level * cls.ell;
}

ActionSpectrum actionSpectrum(const ProductHamiltonian &H, const HomotopyClass &cls)
{
    ActionSpectrum spec;
    spec.families = enumerateFamilies(H, cls);
    for (std::size_t i = 0; i < spec.families.size(); ++i) {
        spec.entries.push_back({spec.families[i].action, i});
    }
    std::stable_sort(spec.entries.begin(), spec.entries.end(),
                     [](const auto &a, const auto &b) { return a.action < b.action; });
    return spec;
}

std::optional<MaxActionOrbit> maxActionOrbit(const ProductHamiltonian &H, const HomotopyClass &cls)
{
    const auto spec = actionSpectrum(H, cls);
    if (spec.entries.empty()) {
        return std::nullopt;
    }
    const auto &top = spec.entries.back();
    return MaxActionOrbit{spec.families[top.familyIndex], top.action};
}

long long nondegeneratePerturbationCount(const PeriodicOrbitFamily &family)
{
    if (!family.morseBott) {
        throw NotMorseBott("family at r = " + std::to_string(family.radialRoot) + " has f'' = 0");
    }
    return 1LL << family.dimension;
}

PhasePoint familySeed(const ProductHamiltonian &H, const PeriodicOrbitFamily &family)
{
    const int n = H.n();
    PhasePoint x;
    x.p0 = family.level;
    x.q0 = 0.0;
    x.p.assign(static_cast<std::size_t>(n), 0.0);
    x.q.assign(static_cast<std::size_t>(n), 0.0);
    return x;
}

LoopSample sampleRepresentative(const ProductHamiltonian &H, const PeriodicOrbitFamily &family,
                                const HomotopyClass &cls, int samples)
{
    if (samples < 2) {
        throw InvalidConfig("need at least two samples per loop");
    }
    const State start = familySeed(H, family).toState();
    const auto q0 = qIndex(H.n(), 0);
    std::vector<double> times;
    std::vector<State> lifted;
    for (int k = 0; k <= samples; ++k) {
        const double t = static_cast<double>(k) / samples;
        State x = start;
        x[q0] += cls.ell * t;
        times.push_back(t);
        lifted.push_back(std::move(x));
    }
    return loopFromLifted(std::move(times), std::move(lifted), cls);
}

bool needsSignReview(const ProductHamiltonian &H, const HomotopyClass &cls) noexcept
{
    return H.form() == ProductHamiltonian::Form::ThreeChart && H.geometry().u() < 0.0 && cls.ell != 0;
}

} // namespace hamcap
