#include "hamcap/homology_capacity.hpp"

#include <algorithm>
#include <cmath>

#include "hamcap/errors.hpp"

namespace hamcap {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

long long binomial(int m, int k)
{
    if (k < 0 || k > m) {
        return 0;
    }
    long long r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (m - k + i) / i;
    }
    return r;
}

void requireInterval(int ell, double a)
{
    if (ell == 0 && !(a > 0.0)) {
        throw InvalidInterval("class 0 needs a > 0, got a = " + std::to_string(a));
    }
}

void requireRelativeHypothesis(const PhaseSpaceConfig &g, int ell, double a, double c)
{
    const double floor = std::max(g.u() * ell, 0.0);
    if (!(c > floor)) {
        throw InvalidHypothesis("need c > max{u ell, 0} = " + std::to_string(floor) + ", got c = " + std::to_string(c));
    }
    if (!(a > 0.0)) {
        throw InvalidInterval("relative homology needs a > 0, got a = " + std::to_string(a));
    }
}

// Largest |p0| where the radial profile is not identically zero, in p0 units.
double radialSupport(const ProductHamiltonian &H)
{
    const auto &f = *H.profile();
    const auto &x = f.breakpoints();
    const auto &v = f.values();
    const auto &d = f.slopes();
    double r = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (v[i] != 0.0 || v[i + 1] != 0.0 || d[i] != 0.0 || d[i + 1] != 0.0) {
            r = std::max({r, std::abs(x[i]), std::abs(x[i + 1])});
        }
    }
    return r * H.radialScale();
}

} // namespace

long long BettiVector::total() const noexcept
{
    long long t = 0;
    for (long long b : dims) {
        t += b;
    }
    return t;
}

long long BettiVector::operator[](int k) const noexcept
{
    if (k < 0 || k >= static_cast<int>(dims.size())) {
        return 0;
    }
    return dims[static_cast<std::size_t>(k)];
}

BettiVector betti(int m)
{
    if (m < 1) {
        throw InvalidConfig("torus dimension must be positive");
    }
    BettiVector b;
    for (int k = 0; k <= m; ++k) {
        b.dims.push_back(binomial(m, k));
    }
    return b;
}

std::vector<long long> MorseCritTable::indexCounts() const
{
    const int m = function == MorseFunction::FT ? 2 * n + 1 : n + 1;
    std::vector<long long> counts(static_cast<std::size_t>(m + 1), 0);
    for (const auto &p : points) {
        ++counts[static_cast<std::size_t>(p.index)];
    }
    return counts;
}

double evalMorseFunction(MorseFunction function, int n, const std::vector<double> &x)
{
    const double base = -static_cast<double>(n) * (n + 2);
    double value = base;
    std::size_t qStart = 0;
    if (function == MorseFunction::FT) {
        double sum = n;
        for (int i = 0; i < n; ++i) {
            sum += std::cos(kPi * x[static_cast<std::size_t>(i)]);
        }
        value += 0.5 * (n + 2) * sum;
        qStart = static_cast<std::size_t>(n);
    }
    double qsum = n + 1;
    for (int i = 0; i <= n; ++i) {
        qsum += std::cos(2.0 * kPi * x[qStart + static_cast<std::size_t>(i)]);
    }
    return value + 0.5 * qsum;
}

MorseCritTable morseCritTable(MorseFunction function, int n)
{
    if (n < 1) {
        throw InvalidConfig("n must be positive");
    }
    MorseCritTable table;
    table.function = function;
    table.n = n;
    const int pCount = function == MorseFunction::FT ? n : 0;
    const int m = pCount + n + 1;
    const double base = -static_cast<double>(n) * (n + 2);
    table.minValue = std::numeric_limits<double>::infinity();
    // Bit j set: coordinate j sits at the minimum of its cosine (p = 1, q = 1/2).
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        MorseCritTable::Point pt;
        int pSigns = 0;
        int qSigns = 0;
        for (int j = 0; j < m; ++j) {
            const bool low = (mask >> j) & 1u;
            const int sign = low ? -1 : 1;
            if (j < pCount) {
                pt.coordinates.push_back(low ? 1.0 : 0.0);
                pSigns += sign;
            } else {
                pt.coordinates.push_back(low ? 0.5 : 0.0);
                qSigns += sign;
            }
            pt.index += low ? 0 : 1;
        }
        pt.value = base + 0.5 * (n + 1 + qSigns);
        if (function == MorseFunction::FT) {
            pt.value += 0.5 * (n + 2) * (n + pSigns);
        }
        table.minValue = std::min(table.minValue, pt.value);
        table.points.push_back(std::move(pt));
    }
    if (function == MorseFunction::FT) {
        table.gammaValue = base + 0.5 * (n + 2) * (2.0 * n) + 0.0;
        if (table.minValue != base || table.gammaValue != 0.0) {
            throw VerificationFailure("F_T anchors failed: min " + std::to_string(table.minValue) + ", F_T(gamma) " +
                                      std::to_string(table.gammaValue));
        }
    }
    return table;
}

long long shDims(const PhaseSpaceConfig &geometry, int ell, double a, int k)
{
    requireInterval(ell, a);
    const int n = geometry.n();
    if (ell != 0 && a < geometry.R() * std::abs(ell)) {
        return 0;
    }
    return binomial(2 * n + 1, k);
}

long long rshDims(const PhaseSpaceConfig &geometry, int ell, double a, double c, int k)
{
    requireRelativeHypothesis(geometry, ell, a, c);
    if (a <= c - geometry.u() * ell) {
        return binomial(geometry.n() + 1, k);
    }
    return 0;
}

long long tMapRank(const PhaseSpaceConfig &geometry, int ell, double a, double c, int k)
{
    requireRelativeHypothesis(geometry, ell, a, c);
    const int n = geometry.n();
    if (geometry.R() * std::abs(ell) < a && a <= c - geometry.u() * ell && k >= 0 && k <= n + 1) {
        return binomial(n + 1, k);
    }
    return 0;
}

long long reducedKunnethSum(int n, int k)
{
    long long sum = 0;
    for (int i = 1; i <= n; ++i) {
        sum += binomial(n, i) * binomial(n + 1, k - i);
    }
    return sum;
}

long long claim6Dims(int n, int k)
{
    if (n < 1 || k < 0 || k > 2 * n + 1) {
        throw InvalidConfig("claim6Dims needs n >= 1 and 0 <= k <= 2n+1");
    }
    long long closed = 0;
    if (k == 0) {
        closed = 0;
    } else if (k <= n + 1) {
        closed = binomial(2 * n + 1, k) - binomial(n + 1, k);
    } else {
        closed = binomial(2 * n + 1, k);
    }
    const long long kunneth = reducedKunnethSum(n, k);
    if (closed != kunneth) {
        throw VerificationFailure("quotient dimension " + std::to_string(closed) + " differs from the Kunneth sum " +
                                  std::to_string(kunneth));
    }
    return closed;
}

CapacityResult capacityFormula(const PhaseSpaceConfig &geometry, int ell, double a, const std::vector<int> &torusWinding)
{
    CapacityResult out;
    if (std::any_of(torusWinding.begin(), torusWinding.end(), [](int w) { return w != 0; })) {
        out.infinite = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    if (ell == 0 && a <= 0.0) {
        out.value = 0.0;
        return out;
    }
    const double u = geometry.u();
    out.value = std::max(geometry.R() * std::abs(ell) + u * ell, a + u * ell);
    return out;
}

// ---------------------------------------------------------------------------
// Verifiers

SharpnessReport verifySharpness(const PhaseSpaceConfig &geometry, int ell, double a, double delta,
                                const SharpnessOptions &options)
{
    SharpnessReport rep;
    rep.ell = ell;
    rep.a = a;
    rep.delta = delta;
    rep.level = sharpnessLevel(geometry, ell, a);
    const auto H = ProductHamiltonian::outerRadial(geometry, buildSharpnessProfile(geometry, ell, a, delta));
    const HomotopyClass cls(ell, geometry.n());

    rep.markedInfimum = infOverMarkedSet(H);
    rep.supportRadius = radialSupport(H);
    rep.compactSupport = rep.supportRadius < geometry.R() &&
                         H.boundaryCollarMax(geometry.R() - rep.supportRadius) == 0.0;

    rep.families = enumerateFamilies(H, cls);
    for (const auto &f : rep.families) {
        if (f.action >= a) {
            ++rep.analyticViolations;
        }
    }

    SweepOptions sweep;
    sweep.integrator = options.integrator;
    sweep.kernel = false;
    const auto entries = shootingSweep(H, cls, randomSeeds(geometry, options.seedCount, options.rngSeed), sweep);
    for (const auto &e : entries) {
        if (!e.converged) {
            continue;
        }
        ++rep.numericConverged;
        rep.worstNumericAction = std::max(rep.worstNumericAction, e.action);
        if (e.action >= a) {
            ++rep.numericViolations;
        }
    }
    const bool levelOk = std::abs(rep.markedInfimum - (rep.level - delta)) <= 1e-12 * std::max(1.0, rep.level);
    rep.pass = levelOk && rep.compactSupport && rep.analyticViolations == 0 && rep.numericViolations == 0;
    return rep;
}

const char *statusName(ExistenceStatus status) noexcept
{
    return status == ExistenceStatus::Verified ? "verified" : "inconclusive";
}

ExistenceReport verifyExistence(const ProductHamiltonian &H, int ell, const ExistenceOptions &options)
{
    const auto &g = H.geometry();
    const int n = g.n();
    const HomotopyClass cls(ell, n);
    ExistenceReport rep;
    rep.ell = ell;
    rep.c = infOverMarkedSet(H);
    const double floor = std::max(g.R() * std::abs(ell) + g.u() * ell, 0.0);
    if (!(rep.c >= floor)) {
        throw InvalidHypothesis("inf over the marked set " + std::to_string(rep.c) + " is below max{R|ell| + u ell, 0} = " +
                                std::to_string(floor));
    }
    rep.bound = rep.c - g.u() * ell;
    rep.bettiBound = betti(n + 1).total();
    rep.signReview = needsSignReview(H, cls);

    if (H.radial()) {
        rep.families = enumerateFamilies(H, cls);
        if (ell != 0 && std::any_of(rep.families.begin(), rep.families.end(), [](const auto &f) { return f.continuum; })) {
            throw VerificationFailure("action spectrum is not finite: f' is constant on an interval");
        }
        const auto best = maxActionOrbit(H, cls);
        if (!best || best->action < rep.bound - options.tolerance) {
            throw VerificationFailure("no family of class " + std::to_string(ell) + " reaches action " +
                                      std::to_string(rep.bound));
        }
        rep.witness = best->family;
        rep.witnessAction = best->action;
        if (best->family.morseBott) {
            rep.perturbationCount = nondegeneratePerturbationCount(best->family);
        }

        // Shoot from a perturbed point of the family.
        PhasePoint seed = familySeed(H, best->family);
        seed.p0 += 1e-5 * g.R();
        seed.q0 += 0.1;
        for (auto &p : seed.p) {
            p += 1e-3;
        }
        const auto shot = shootPeriodicOrbit(H, cls, seed, options.integrator);
        rep.seedsUsed = 1;
        rep.numericConverged = shot.converged;
        if (shot.converged) {
            rep.numericLevel = shot.level;
            rep.numericAction = shot.action;
            rep.levelAgreement = std::abs(shot.level - best->family.level);
            rep.actionAgreement = std::abs(shot.action - best->action);
        }
        rep.status = ExistenceStatus::Verified;
        rep.pass = shot.converged && rep.levelAgreement <= options.tolerance &&
                   rep.actionAgreement <= options.tolerance && rep.witnessAction >= rep.bound - options.tolerance &&
                   (!rep.perturbationCount || *rep.perturbationCount >= rep.bettiBound);
        return rep;
    }

    const int lattice = options.seedBudget / 2;
    auto seeds = seedLattice(H, lattice);
    const auto extra = randomSeeds(g, options.seedBudget - lattice, options.rngSeed);
    seeds.insert(seeds.end(), extra.begin(), extra.end());
    SweepOptions sweep;
    sweep.integrator = options.integrator;
    sweep.kernel = false;
    const auto entries = shootingSweep(H, cls, seeds, sweep);
    rep.seedsUsed = seeds.size();
    for (const auto &e : entries) {
        if (e.converged && (!rep.numericConverged || e.action > rep.numericAction)) {
            rep.numericConverged = true;
            rep.numericLevel = e.level;
            rep.numericAction = e.action;
        }
    }
    rep.status = rep.numericConverged && rep.numericAction >= rep.bound - options.tolerance ? ExistenceStatus::Verified
                                                                                            : ExistenceStatus::Inconclusive;
    rep.pass = rep.status == ExistenceStatus::Verified;
    return rep;
}

} // namespace hamcap
