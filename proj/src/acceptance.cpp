#include "hamcap/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "hamcap/errors.hpp"
#include "hamcap/homology_capacity.hpp"
#include "hamcap/numeric_orbits.hpp"
#include "hamcap/orbit_analysis.hpp"

namespace hamcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Collects checks; keeps the first failure message.
class Tally {
public:
    explicit Tally(CriterionResult &r) : r_(r) {}

    bool check(bool ok, const std::function<std::string()> &what)
    {
        ++r_.checks;
        if (!ok) {
            if (r_.failures == 0) {
                r_.detail = what();
            }
            ++r_.failures;
        }
        return ok;
    }

private:
    CriterionResult &r_;
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string where(const PhaseSpaceConfig &g, int ell)
{
    return "R=" + fmt(g.R()) + " u=" + fmt(g.u()) + " n=" + std::to_string(g.n()) + " ell=" + std::to_string(ell);
}

long long choose(int m, int k)
{
    return betti(m)[k];
}

IntegratorConfig sweepIntegrator()
{
    // The sharpness Hamiltonians are q-independent, so the midpoint rule is exact
    // on their flow and a coarse grid loses nothing.
    IntegratorConfig cfg;
    cfg.stepCount = 16;
    return cfg;
}

void capacityAndSharpness(CriterionResult &r, const AcceptanceOptions &opt)
{
    Tally t(r);
    SharpnessOptions sharp;
    sharp.seedCount = opt.seedCount;
    sharp.integrator = sweepIntegrator();
    sharp.rngSeed = opt.rngSeed;
    std::size_t certified = 0;
    for (double R : {0.5, 1.0, 2.0}) {
        for (double u : {-R / 2, 0.0, R / 2}) {
            const PhaseSpaceConfig g(R, u, 1);
            for (int ell = -2; ell <= 2; ++ell) {
                for (double a : {-kInf, 0.5, R * std::abs(ell) + 1.0}) {
                    const double expected = std::max(R * std::abs(ell) + u * ell, a + u * ell);
                    const double got = capacityFormula(g, ell, a).value;
                    t.check(got == expected, [&] {
                        return "capacity " + fmt(got) + " != " + fmt(expected) + " at " + where(g, ell) + " a=" + fmt(a);
                    });
                    if (ell == 0 && a == -kInf) {
                        continue; // no sharpness Hamiltonian for the empty interval
                    }
                    for (double delta : {0.2, 0.1}) {
                        try {
                            const auto rep = verifySharpness(g, ell, a, delta, sharp);
                            const bool empty = a == -kInf ? rep.families.empty() : rep.analyticViolations == 0;
                            t.check(rep.pass && empty && rep.numericViolations == 0, [&] {
                                return "sharpness failed at " + where(g, ell) + " a=" + fmt(a) + " delta=" + fmt(delta) +
                                       ": " + std::to_string(rep.analyticViolations) + " analytic, " +
                                       std::to_string(rep.numericViolations) + " numeric violations";
                            });
                            ++certified;
                        } catch (const Error &e) {
                            t.check(false, [&] { return std::string(e.what()); });
                        }
                    }
                }
            }
        }
    }
    if (r.failures == 0) {
        r.detail = std::to_string(certified) + " sharpness certificates, " + std::to_string(opt.seedCount) +
                   " seeds each";
    }
}

struct ExistenceInput {
    PhaseSpaceConfig g;
    double s;
    int ell;
};

std::vector<ExistenceInput> existenceInputs()
{
    std::vector<ExistenceInput> out;
    for (double s : {-2.0, -4.0}) {
        for (int n : {1, 2}) {
            for (double u : {0.0, 0.3}) {
                for (int ell : {1, 2}) {
                    out.push_back({PhaseSpaceConfig(1.0, u, n), s, ell});
                }
            }
        }
    }
    return out;
}

ProductHamiltonian existenceHamiltonian(const ExistenceInput &in)
{
    const auto &g = in.g;
    const double c = std::max(g.R() * std::abs(in.ell) + g.u() * in.ell, 0.0);
    return ProductHamiltonian::threeChart(g, buildPlateauProfile({FamilyKind::PlateauInner, in.s, c, g, in.ell}), in.s);
}

void existence(CriterionResult &r, const AcceptanceOptions &)
{
    Tally t(r);
    double worst = 0.0;
    for (const auto &in : existenceInputs()) {
        try {
            const auto rep = verifyExistence(existenceHamiltonian(in), in.ell);
            worst = std::max({worst, rep.levelAgreement, rep.actionAgreement});
            t.check(rep.pass && rep.witnessAction >= rep.bound && rep.numericConverged &&
                        rep.levelAgreement <= 1e-6 && rep.actionAgreement <= 1e-6,
                    [&] {
                        return "no witness at " + where(in.g, in.ell) + " s=" + fmt(in.s) + ": action " +
                               fmt(rep.witnessAction) + " vs bound " + fmt(rep.bound) + ", level gap " +
                               fmt(rep.levelAgreement);
                    });
        } catch (const Error &e) {
            t.check(false, [&] { return std::string(e.what()); });
        }
    }
    if (r.failures == 0) {
        r.detail = "worst analytic/numeric gap " + fmt(worst);
    }
}

void orbitCount(CriterionResult &r, const AcceptanceOptions &)
{
    Tally t(r);
    for (const auto &in : existenceInputs()) {
        try {
            const auto best = maxActionOrbit(existenceHamiltonian(in), HomotopyClass(in.ell, in.g.n()));
            const int n = in.g.n();
            const long long expected = 1LL << (n + 1);
            const auto morse = morseCritTable(MorseFunction::FminusT, n);
            const bool isQ = best && best->family.kind == OrbitKind::Q;
            const long long count = isQ ? nondegeneratePerturbationCount(best->family) : -1;
            t.check(isQ && count == expected && betti(n + 1).total() == expected &&
                        static_cast<long long>(morse.points.size()) == expected,
                    [&] { return "count " + std::to_string(count) + " at " + where(in.g, in.ell); });
        } catch (const Error &e) {
            t.check(false, [&] { return std::string(e.what()); });
        }
    }
    if (r.failures == 0) {
        r.detail = "2^(n+1) perturbed orbits for every witness";
    }
}

void stepInequalities(CriterionResult &r, const AcceptanceOptions &)
{
    Tally t(r);
    for (double R : {1.0, 2.0}) {
        for (double u : {0.0, 0.25 * R}) {
            for (int n : {1, 2}) {
                const PhaseSpaceConfig g(R, u, n);
                for (int ell : {-2, -1, 1, 2}) {
                    const double c = std::max(u * ell, 0.0) + 1.0;
                    for (double s : {2.0, 4.0, 10.0}) {
                        const auto f = buildPlateauProfile({FamilyKind::PlateauOuter, s, c, g, ell});
                        const double top = f.value(0.0);
                        if (!(top > R * std::abs(ell))) {
                            continue;
                        }
                        const auto fams = enumerateFamilies(ProductHamiltonian::outerRadial(g, f), HomotopyClass(ell, n));
                        if (!t.check(fams.size() == 2, [&] { return "expected two P-families at " + where(g, ell); })) {
                            continue;
                        }
                        const double hi = std::max(fams[0].action, fams[1].action);
                        const double lo = std::min(fams[0].action, fams[1].action);
                        for (double w : {0.05, 0.5, 0.95}) {
                            const double a = R * std::abs(ell) + w * (top - R * std::abs(ell));
                            t.check(hi > top && top > a && lo < a, [&] {
                                return "P actions " + fmt(lo) + ", " + fmt(hi) + " do not straddle a=" + fmt(a) + " at " +
                                       where(g, ell) + " s=" + fmt(s);
                            });
                        }
                    }
                    for (double s : {-1.0, -2.0, -4.0, -10.0}) {
                        const auto H = ProductHamiltonian::threeChart(
                            g, buildPlateauProfile({FamilyKind::PlateauInner, s, c, g, ell}), s);
                        for (const auto &fam : enumerateFamilies(H, HomotopyClass(ell, n))) {
                            if (fam.kind == OrbitKind::Rfam) {
                                t.check(fam.action < 0.0, [&] {
                                    return "R-family action " + fmt(fam.action) + " >= 0 at " + where(g, ell) +
                                           " s=" + fmt(s);
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    if (r.failures == 0) {
        r.detail = std::to_string(r.checks) + " sign checks";
    }
}

void dimensionTables(CriterionResult &r, const AcceptanceOptions &)
{
    Tally t(r);
    for (int n = 1; n <= 3; ++n) {
        const int big = 2 * n + 1;
        const int small = n + 1;
        for (double R : {0.5, 1.0, 2.0}) {
            for (double u : {-R / 2, 0.0, R / 2}) {
                const PhaseSpaceConfig g(R, u, n);
                for (int ell = -2; ell <= 2; ++ell) {
                    const double c = R * std::abs(ell) + std::abs(u * ell) + 1.0;
                    for (double a : {0.25, R * std::abs(ell) + 0.5, c - u * ell, c - u * ell + 0.5}) {
                        for (int k = 0; k <= big; ++k) {
                            const long long sh = ell == 0 || a >= R * std::abs(ell) ? choose(big, k) : 0;
                            const long long rsh = a <= c - u * ell ? choose(small, k) : 0;
                            const long long rank =
                                R * std::abs(ell) < a && a <= c - u * ell && k <= small ? choose(small, k) : 0;
                            const bool ok = shDims(g, ell, a, k) == sh && rshDims(g, ell, a, c, k) == rsh &&
                                            tMapRank(g, ell, a, c, k) == rank && rank <= std::min(sh, rsh);
                            t.check(ok, [&] { return "table mismatch at " + where(g, ell) + " a=" + fmt(a) + " k=" + std::to_string(k); });
                        }
                    }
                }
            }
        }
        for (int k = 0; k <= big; ++k) {
            // Independent convolution of reduced b(T^n) with b(T^{n+1}).
            long long conv = 0;
            for (int i = 1; i <= n; ++i) {
                conv += choose(n, i) * choose(small, k - i);
            }
            const long long closed = k == 0 ? 0 : (k <= small ? choose(big, k) - choose(small, k) : choose(big, k));
            long long got = -1;
            try {
                got = claim6Dims(n, k);
            } catch (const Error &) {
            }
            t.check(got == closed && got == conv, [&] {
                return "quotient dimension " + std::to_string(got) + " at n=" + std::to_string(n) + " k=" + std::to_string(k);
            });
        }
        try {
            const auto ft = morseCritTable(MorseFunction::FT, n);
            const auto counts = ft.indexCounts();
            const auto b = betti(big);
            t.check(ft.minValue == -static_cast<double>(n * (n + 2)) && ft.gammaValue == 0.0 && counts == b.dims,
                    [&] { return "F_T anchors fail at n=" + std::to_string(n); });
            t.check(morseCritTable(MorseFunction::FminusT, n).indexCounts() == betti(small).dims,
                    [&] { return "F_-T index counts fail at n=" + std::to_string(n); });
        } catch (const Error &e) {
            t.check(false, [&] { return std::string(e.what()); });
        }
    }
    if (r.failures == 0) {
        r.detail = std::to_string(r.checks) + " table entries";
    }
}

void oracleEquivalence(CriterionResult &r, const AcceptanceOptions &opt)
{
    Tally t(r);
    std::mt19937_64 rng(opt.rngSeed);
    double worstLevel = 0.0, worstAction = 0.0, worstDrift = 0.0, worstDet = 0.0;
    SweepOptions sweep;
    sweep.threads = opt.threads;
    for (int n : {1, 2}) {
        const PhaseSpaceConfig g(1.0, 0.3, n);
        for (double s : {-4.0, -2.0, 2.0, 4.0}) {
            for (int ell = -2; ell <= 2; ++ell) {
                const auto H = matrixHamiltonian(g, s, ell);
                const HomotopyClass cls(ell, n);
                const auto fams = enumerateFamilies(H, cls);
                const auto entries = shootingSweep(H, cls, seedLattice(H, opt.seedCount), sweep);
                const auto cmp = compareWithAnalytic(fams, entries, cls);
                worstLevel = std::max(worstLevel, cmp.worstLevelError);
                worstAction = std::max(worstAction, cmp.worstActionError);
                t.check(cmp.pass(), [&] {
                    return std::to_string(cmp.missing.size()) + " missing, " + std::to_string(cmp.extra.size()) +
                           " extra, " + std::to_string(cmp.kernelMismatches) + " kernel mismatches at " + where(g, ell) +
                           " s=" + fmt(s);
                });

                const auto starts = randomSeeds(g, 20, rng());
                for (const auto &x0 : starts) {
                    const State a = x0.toState();
                    const State b = timeOneMap(H, a);
                    worstDrift = std::max(worstDrift, std::abs(H.value(b.data()) - H.value(a.data())));
                }
                for (std::size_t k = 0; k < 4; ++k) {
                    const auto J = timeOneJacobian(H, starts[k].toState());
                    worstDet = std::max(worstDet, std::abs(J.determinant() - 1.0));
                }
            }
        }
    }
    t.check(worstDrift <= 1e-8, [&] { return "energy drift " + fmt(worstDrift); });
    t.check(worstDet <= 1e-5, [&] { return "Jacobian determinant off by " + fmt(worstDet); });
    if (r.failures == 0) {
        r.detail = "level err " + fmt(worstLevel) + ", action err " + fmt(worstAction) + ", drift " + fmt(worstDrift) +
                   ", |det-1| " + fmt(worstDet);
    }
}

void profileProperties(CriterionResult &r, const AcceptanceOptions &)
{
    Tally t(r);
    std::size_t profiles = 0;
    for (double R : {1.0, 2.0}) {
        for (double u : {-0.3, 0.0, 0.3}) {
            for (int n : {1, 2}) {
                const PhaseSpaceConfig g(R, u, n);
                auto run = [&](const ProfileFamilySpec &spec, bool inner) {
                    try {
                        const auto f = spec.kind == FamilyKind::BumpContractible ? buildBumpProfile(spec)
                                                                                 : buildPlateauProfile(spec);
                        const auto rep = validateProfile(f, spec);
                        ++profiles;
                        std::string failed;
                        for (const auto &c : rep.checks) {
                            if (c.applicable && !c.pass) {
                                failed = c.name + " (" + c.detail + ")";
                                break;
                            }
                        }
                        t.check(rep.allPass(), [&] { return failed + " at " + where(g, spec.ell) + " s=" + fmt(spec.s); });
                        if (inner) {
                            const auto *viii = rep.find("outer_chart_roots");
                            t.check(viii && viii->applicable && viii->pass,
                                    [&] { return "outer chart roots unchecked at " + where(g, spec.ell); });
                        }
                    } catch (const Error &e) {
                        t.check(false, [&] { return std::string(e.what()); });
                    }
                };
                for (double s : {-4.0, -2.0, -1.0, 1.0, 2.0, 4.0}) {
                    run({FamilyKind::BumpContractible, s, 1.0, g, 0}, false);
                }
                for (int ell : {-2, -1, 1, 2}) {
                    const double c = std::max(u * ell, 0.0) + 1.0;
                    for (double s : {1.0, 2.0, 4.0, 10.0}) {
                        run({FamilyKind::PlateauOuter, s, c, g, ell}, false);
                    }
                    for (double s : {-1.0, -2.0, -4.0, -10.0}) {
                        run({FamilyKind::PlateauInner, s, c, g, ell}, true);
                    }
                }
            }
        }
    }
    if (r.failures == 0) {
        r.detail = std::to_string(profiles) + " profiles";
    }
}

struct Criterion {
    int id;
    const char *title;
    double budget;
    void (*run)(CriterionResult &, const AcceptanceOptions &);
};

const Criterion kCriteria[] = {
    {1, "capacity formula and sharpness", 60.0, capacityAndSharpness},
    {2, "existence and action bound", 120.0, existence},
    {3, "orbit-count lower bound", 0.0, orbitCount},
    {4, "step inequalities", 0.0, stepInequalities},
    {5, "dimension tables", 0.0, dimensionTables},
    {6, "numeric-analytic oracle equivalence", 0.0, oracleEquivalence},
    {7, "profile properties", 0.0, profileProperties},
};

} // namespace

ProductHamiltonian matrixHamiltonian(const PhaseSpaceConfig &g, double s, int ell)
{
    const double c = std::max(g.u() * ell, 0.0) + 1.0;
    if (ell == 0) {
        const auto bump = buildBumpProfile({FamilyKind::BumpContractible, s, c, g, 0});
        return s > 0 ? ProductHamiltonian::outerRadial(g, bump) : ProductHamiltonian::threeChart(g, bump, s);
    }
    if (s > 0) {
        return ProductHamiltonian::outerRadial(g, buildPlateauProfile({FamilyKind::PlateauOuter, s, c, g, ell}));
    }
    return ProductHamiltonian::threeChart(g, buildPlateauProfile({FamilyKind::PlateauInner, s, c, g, ell}), s);
}

std::vector<CriterionResult> runAcceptance(const AcceptanceOptions &options)
{
    std::vector<CriterionResult> out;
    for (const auto &c : kCriteria) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
            continue;
        }
        CriterionResult r;
        r.id = c.id;
        r.title = c.title;
        r.budgetSeconds = c.budget;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(r, options);
        } catch (const std::exception &e) {
            ++r.failures;
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r.budgetSeconds > 0.0 && r.seconds > r.budgetSeconds && r.failures == 0) {
            r.detail = "over the time budget";
        }
        r.pass = r.failures == 0 && (r.budgetSeconds <= 0.0 || r.seconds <= r.budgetSeconds);
        if (options.onResult) {
            options.onResult(r);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string formatCriterion(const CriterionResult &r)
{
    char head[160];
    if (r.budgetSeconds > 0.0) {
        std::snprintf(head, sizeof head, "[%s] %d %s (%.2f s / %.0f s, %zu checks)", r.pass ? "PASS" : "FAIL", r.id,
                      r.title.c_str(), r.seconds, r.budgetSeconds, r.checks);
    } else {
        std::snprintf(head, sizeof head, "[%s] %d %s (%.2f s, %zu checks)", r.pass ? "PASS" : "FAIL", r.id,
                      r.title.c_str(), r.seconds, r.checks);
    }
    return r.detail.empty() ? std::string(head) : std::string(head) + " " + r.detail;
}

} // namespace hamcap
