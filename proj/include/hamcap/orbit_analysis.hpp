#pragma once

// Analytic enumeration of the Morse-Bott periodic-orbit families of radial
// product Hamiltonians in a class (alpha_ell, 0).

#include <optional>
#include <string>
#include <vector>

#include "hamcap/hamiltonians.hpp"
#include "hamcap/phase_space.hpp"

namespace hamcap {

enum class OrbitKind {
    P,           // outer radial chart, p0 = R r
    Q,           // bump chart around u-bar, p0 = u + m_u r
    Rfam,        // upper/lower three-chart collars, p0 = +-|u| + (R - |u|) r
    Contractible // class 0, critical points of the profile
};

const char *kindName(OrbitKind kind) noexcept;

struct PeriodicOrbitFamily {
    OrbitKind kind = OrbitKind::P;
    double radialRoot = 0.0; // profile argument r at the orbit
    double level = 0.0;      // p0 along the orbit
    int dimension = 0;
    double action = 0.0;
    bool morseBott = false;
    int secondDerivativeSign = 0; // sign of f''(r); 0 when degenerate
    double profileValue = 0.0;    // f(r) = H on the orbit
    bool continuum = false;       // midpoint of an interval where f' is constant
};

/// Families sorted by level. Class 0 keeps only families with positive action:
/// constant orbits on the flat parts of a profile form degenerate continua of
/// non-positive action that no filtered homology window sees.
/// Throws NotRadial for grid and blend Hamiltonians.
std::vector<PeriodicOrbitFamily> enumerateFamilies(const ProductHamiltonian &H, const HomotopyClass &cls);

/// f(r) - level * ell.
double actionOfFamily(const PeriodicOrbitFamily &family, double profileValue, const PhaseSpaceConfig &geometry,
                      const HomotopyClass &cls);

struct ActionSpectrum {
    struct Entry {
        double action;
        std::size_t familyIndex;
    };
    std::vector<Entry> entries; // ascending
    std::vector<PeriodicOrbitFamily> families;
};

ActionSpectrum actionSpectrum(const ProductHamiltonian &H, const HomotopyClass &cls);

struct MaxActionOrbit {
    PeriodicOrbitFamily family;
    double action;
};

std::optional<MaxActionOrbit> maxActionOrbit(const ProductHamiltonian &H, const HomotopyClass &cls);

/// 2^dimension, the total Betti number of the family's torus. Throws NotMorseBott.
long long nondegeneratePerturbationCount(const PeriodicOrbitFamily &family);

/// Initial point of one orbit of the family (q = 0, torus momenta at their
/// family value or 0 where free).
PhasePoint familySeed(const ProductHamiltonian &H, const PeriodicOrbitFamily &family);

/// One loop of the family sampled at K+1 times, lifted in the class.
LoopSample sampleRepresentative(const ProductHamiltonian &H, const PeriodicOrbitFamily &family,
                                const HomotopyClass &cls, int samples = 256);

/// True for three-chart inputs with u < 0 and ell != 0: the collar levels use |u|
/// while the bump-chart levels use u, so such reports are marked for review.
bool needsSignReview(const ProductHamiltonian &H, const HomotopyClass &cls) noexcept;

} // namespace hamcap
