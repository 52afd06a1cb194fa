#pragma once

// Closed-form homology tables, the relative capacity formula, and the two
// end-to-end verifiers (sharpness and existence).

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hamcap/hamiltonians.hpp"
#include "hamcap/numeric_orbits.hpp"
#include "hamcap/orbit_analysis.hpp"

namespace hamcap {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct BettiVector {
    std::vector<long long> dims; // dims[k] = C(m, k), k = 0..m

    long long total() const noexcept;
    /// b_k, zero outside 0..m.
    long long operator[](int k) const noexcept;
};

/// Z/2 Betti numbers of the m-torus. Throws InvalidConfig unless m >= 1.
BettiVector betti(int m);

enum class MorseFunction {
    FT,      // on (R/2Z)^n x (R/Z)^{n+1}, coordinates (p1..pn, q0..qn)
    FminusT  // on (R/Z)^{n+1}, coordinates (q0..qn)
};

struct MorseCritTable {
    struct Point {
        std::vector<double> coordinates;
        int index = 0;
        double value = 0.0;
    };
    MorseFunction function = MorseFunction::FT;
    int n = 1;
    std::vector<Point> points;
    double minValue = 0.0;
    /// F_T at the point maximal in p and minimal in q; NaN for F_{-T}.
    double gammaValue = std::numeric_limits<double>::quiet_NaN();

    std::vector<long long> indexCounts() const;
};

double evalMorseFunction(MorseFunction function, int n, const std::vector<double> &coordinates);

/// All critical points (every cosine at +-1). Throws VerificationFailure if the
/// anchors min F_T = -n(n+2) and F_T(gamma) = 0 fail.
MorseCritTable morseCritTable(MorseFunction function, int n);

/// dim SH_k^{[a, inf)} in class (alpha_ell, 0). Throws InvalidInterval for ell = 0, a <= 0.
long long shDims(const PhaseSpaceConfig &geometry, int ell, double a, int k);
/// dim RSH_k^{[a, inf); c}. Throws InvalidHypothesis unless c > max{u ell, 0}
/// and InvalidInterval unless a > 0.
long long rshDims(const PhaseSpaceConfig &geometry, int ell, double a, double c, int k);
/// Rank of T_k: SH_k -> RSH_k. Same preconditions as rshDims.
long long tMapRank(const PhaseSpaceConfig &geometry, int ell, double a, double c, int k);
/// Dimension of the quotient in the long exact sequence for degree k; checked
/// against the reduced Kunneth sum. Throws InvalidConfig unless 0 <= k <= 2n+1.
long long claim6Dims(int n, int k);
/// sum_{i+j=k} reduced b_i(T^n) * b_j(T^{n+1}).
long long reducedKunnethSum(int n, int k);

struct CapacityResult {
    double value = 0.0;
    bool infinite = false; // empty admissible set (inf of the empty set)
    std::optional<std::string> witnessSharpness;
    std::optional<std::string> witnessExistence;
};

/// max{R|ell| + u ell, a + u ell}; `a` may be -infinity. A nonzero torus winding
/// gives the +inf sentinel.
CapacityResult capacityFormula(const PhaseSpaceConfig &geometry, int ell, double a,
                               const std::vector<int> &torusWinding = {});

// ---------------------------------------------------------------------------
// Verifiers

struct SharpnessOptions {
    int seedCount = 1000;
    IntegratorConfig integrator;
    std::uint64_t rngSeed = 20240611;
};

struct SharpnessReport {
    int ell = 0;
    double a = 0.0;
    double delta = 0.0;
    double level = 0.0;          // m = max{R|ell| + u ell, a + u ell}
    double markedInfimum = 0.0;  // inf of H over the marked set
    double supportRadius = 0.0;  // largest |p0| with H != 0
    bool compactSupport = false;
    std::vector<PeriodicOrbitFamily> families;
    std::size_t analyticViolations = 0; // families with action >= a
    std::size_t numericConverged = 0;
    std::size_t numericViolations = 0; // converged orbits with action >= a
    double worstNumericAction = kNegInf;
    bool pass = false;
};

SharpnessReport verifySharpness(const PhaseSpaceConfig &geometry, int ell, double a, double delta,
                                const SharpnessOptions &options = {});

struct ExistenceOptions {
    double tolerance = 1e-6;
    int seedBudget = 10000; // non-radial inputs only
    IntegratorConfig integrator;
    std::uint64_t rngSeed = 20240611;
};

enum class ExistenceStatus {
    Verified,
    Inconclusive // non-radial input, seed budget exhausted without a witness
};

struct ExistenceReport {
    int ell = 0;
    double c = 0.0;     // inf over the marked set
    double bound = 0.0; // c - u ell
    ExistenceStatus status = ExistenceStatus::Inconclusive;
    std::optional<PeriodicOrbitFamily> witness; // analytic witness (radial inputs)
    double witnessAction = 0.0;
    bool numericConverged = false;
    double numericLevel = 0.0;
    double numericAction = 0.0;
    double levelAgreement = 0.0; // |numeric - analytic| level
    double actionAgreement = 0.0;
    std::optional<long long> perturbationCount; // 2^dim of the witness family
    long long bettiBound = 0;                   // sum of b_k(T^{n+1})
    std::size_t seedsUsed = 0;
    bool signReview = false;
    std::vector<PeriodicOrbitFamily> families;
    bool pass = false;
};

/// Throws InvalidHypothesis unless c >= max{R|ell| + u ell, 0}, and
/// VerificationFailure when a radial input has no witness.
ExistenceReport verifyExistence(const ProductHamiltonian &H, int ell, const ExistenceOptions &options = {});

const char *statusName(ExistenceStatus status) noexcept;

} // namespace hamcap
