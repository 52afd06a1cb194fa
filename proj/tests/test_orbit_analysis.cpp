#include "doctest.h"

#include <cmath>
#include <limits>

#include "hamcap/errors.hpp"
#include "hamcap/numeric_orbits.hpp"
#include "hamcap/orbit_analysis.hpp"

using namespace hamcap;

template <>
struct doctest::StringMaker<OrbitKind> {
    static doctest::String convert(OrbitKind kind) { return kindName(kind); }
};

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ProductHamiltonian outerPlateau(double s, const PhaseSpaceConfig &g, int ell, double c = 1.0)
{
    return ProductHamiltonian::outerRadial(g, buildPlateauProfile({FamilyKind::PlateauOuter, s, c, g, ell}));
}

ProductHamiltonian innerPlateau(double s, const PhaseSpaceConfig &g, int ell, double c = 1.0)
{
    return ProductHamiltonian::threeChart(g, buildPlateauProfile({FamilyKind::PlateauInner, s, c, g, ell}), s);
}

ProductHamiltonian outerBump(double s, const PhaseSpaceConfig &g, double c = 1.0)
{
    return ProductHamiltonian::outerRadial(g, buildBumpProfile({FamilyKind::BumpContractible, s, c, g, 0}));
}

int countKind(const std::vector<PeriodicOrbitFamily> &fams, OrbitKind kind)
{
    return static_cast<int>(std::count_if(fams.begin(), fams.end(), [&](const auto &f) { return f.kind == kind; }));
}

} // namespace

TEST_CASE("enumerateFamilies examples")
{
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    const auto plateau = outerPlateau(4.0, g, 2);
    REQUIRE(plateau.profile()->value(0.0) == doctest::Approx(5.0));
    const auto fams = enumerateFamilies(plateau, HomotopyClass(2, 1));
    REQUIRE(fams.size() == 2u);
    for (const auto &f : fams) {
        CHECK(f.kind == OrbitKind::P);
        CHECK(f.dimension == 3);
        CHECK(f.morseBott);
    }

    const auto inner = innerPlateau(-4.0, g, 1);
    const auto innerFams = enumerateFamilies(inner, HomotopyClass(1, 1));
    CHECK(countKind(innerFams, OrbitKind::Q) == 2);
    for (const auto &f : innerFams) {
        if (f.kind == OrbitKind::Q) {
            CHECK(f.dimension == 2);
        } else {
            REQUIRE(f.kind == OrbitKind::Rfam);
            CHECK(f.action < 0.0);
        }
    }

    const auto bump = outerBump(2.0, g);
    const auto contractible = enumerateFamilies(bump, HomotopyClass(0, 1));
    REQUIRE(contractible.size() == 1u);
    CHECK(contractible[0].kind == OrbitKind::Contractible);
    CHECK(contractible[0].dimension == 3);
    CHECK(contractible[0].action == doctest::Approx(bump.profile()->value(0.0)));

    CHECK_THROWS_AS(enumerateFamilies(ProductHamiltonian::sampledGrid(g, {{2, 1}, {0.0, 0.0}, {}}), HomotopyClass(1, 1)),
                    NotRadial);
}

TEST_CASE("actionOfFamily examples")
{
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    PeriodicOrbitFamily p;
    p.kind = OrbitKind::P;
    p.radialRoot = -0.5;
    p.level = -0.5;
    CHECK(actionOfFamily(p, 0.75, g, HomotopyClass(1, 1)) == doctest::Approx(1.25));

    PeriodicOrbitFamily q;
    q.kind = OrbitKind::Q;
    q.radialRoot = -0.2;
    q.level = 0.0 + 1.0 * -0.2;
    CHECK(actionOfFamily(q, 0.4, g, HomotopyClass(1, 1)) == doctest::Approx(0.4 - (-0.2)));
    CHECK(actionOfFamily(q, 0.4, g, HomotopyClass(0, 1)) == 0.4);
}

TEST_CASE("actionSpectrum and maxActionOrbit examples")
{
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    const auto plateau = outerPlateau(4.0, g, 2);
    const auto spec = actionSpectrum(plateau, HomotopyClass(2, 1));
    REQUIRE(spec.entries.size() == 2u);
    CHECK(spec.entries[0].action <= spec.entries[1].action);
    CHECK(spec.entries.back().action > plateau.profile()->value(0.0));

    const auto inner = innerPlateau(-4.0, g, 1);
    for (const auto &e : actionSpectrum(inner, HomotopyClass(1, 1)).entries) {
        if (actionSpectrum(inner, HomotopyClass(1, 1)).families[e.familyIndex].kind == OrbitKind::Rfam) {
            CHECK(e.action < 0.0);
        }
    }
    CHECK(actionSpectrum(ProductHamiltonian::zero(g), HomotopyClass(1, 1)).entries.empty());

    const auto sharp = ProductHamiltonian::outerRadial(g, buildSharpnessProfile(g, 1, -kInf, 0.1));
    const auto none = maxActionOrbit(sharp, HomotopyClass(1, 1));
    CHECK((!none || none->action < 1.0));

    const auto best = maxActionOrbit(inner, HomotopyClass(1, 1));
    REQUIRE(best);
    CHECK(best->family.kind == OrbitKind::Q);
    CHECK(best->action > 1.0);

    const auto bump = outerBump(2.0, g);
    const auto top = maxActionOrbit(bump, HomotopyClass(0, 1));
    REQUIRE(top);
    CHECK(top->family.kind == OrbitKind::Contractible);
    CHECK(top->action == doctest::Approx(bump.profile()->value(0.0)));
}

TEST_CASE("nondegeneratePerturbationCount")
{
    const auto q = enumerateFamilies(innerPlateau(-4.0, PhaseSpaceConfig(1.0, 0.0, 1), 1), HomotopyClass(1, 1));
    const auto qFam = std::find_if(q.begin(), q.end(), [](const auto &f) { return f.kind == OrbitKind::Q; });
    REQUIRE(qFam != q.end());
    CHECK(nondegeneratePerturbationCount(*qFam) == 4);

    const auto p = enumerateFamilies(outerPlateau(4.0, PhaseSpaceConfig(1.0, 0.0, 1), 2), HomotopyClass(2, 1));
    CHECK(nondegeneratePerturbationCount(p.front()) == 8);

    PeriodicOrbitFamily flat;
    flat.dimension = 3;
    flat.morseBott = false;
    CHECK_THROWS_AS(nondegeneratePerturbationCount(flat), NotMorseBott);
}

TEST_CASE("property: levels, actions and dimensions are consistent with the charts")
{
    for (int n : {1, 2}) {
        for (double u : {0.0, 0.3, -0.3}) {
            const PhaseSpaceConfig g(1.0, u, n);
            for (int ell : {-2, -1, 0, 1, 2}) {
                std::vector<ProductHamiltonian> hams;
                if (ell == 0) {
                    hams.push_back(outerBump(2.0, g));
                    hams.push_back(ProductHamiltonian::threeChart(
                        g, buildBumpProfile({FamilyKind::BumpContractible, -4.0, 1.0, g, 0}), -4.0));
                } else {
                    const double c = std::max(u * ell, 0.0) + 1.0;
                    hams.push_back(outerPlateau(4.0, g, ell, c));
                    hams.push_back(innerPlateau(-2.0, g, ell, c));
                }
                for (const auto &H : hams) {
                    const HomotopyClass cls(ell, n);
                    const auto fams = enumerateFamilies(H, cls);
                    CHECK_FALSE(fams.empty());
                    const double au = std::abs(u);
                    for (const auto &f : fams) {
                        const State x = familySeed(H, f).toState();
                        CHECK(std::abs(H.value(x.data()) - f.level * ell - f.action) <= 1e-10);
                        CHECK(f.morseBott == (std::abs(H.profile()->curvature(f.radialRoot)) >= kDegenerateCurvature));
                        switch (f.kind) {
                        case OrbitKind::P:
                            CHECK(f.level == doctest::Approx(g.R() * f.radialRoot));
                            CHECK(f.dimension == 2 * n + 1);
                            break;
                        case OrbitKind::Q:
                            CHECK(f.level == doctest::Approx(u + g.mu() * f.radialRoot));
                            CHECK(f.dimension == n + 1);
                            break;
                        case OrbitKind::Rfam:
                            CHECK(std::abs(f.level) == doctest::Approx(au + (g.R() - au) * std::abs(f.radialRoot)));
                            CHECK(f.dimension == 2 * n + 1);
                            CHECK(f.action < 0.0);
                            // No collar orbits on the side opposite to the sign of ell.
                            CHECK(f.level * ell > 0.0);
                            break;
                        case OrbitKind::Contractible:
                            CHECK(f.dimension == (H.form() == ProductHamiltonian::Form::ThreeChart ? n + 1 : 2 * n + 1));
                            CHECK(f.action > 0.0);
                            break;
                        }
                        // The sampled loop has the family's action and winding.
                        const auto loop = sampleRepresentative(H, f, cls, 64);
                        CHECK(loopAction(H, loop) == doctest::Approx(f.action).epsilon(1e-12));
                        CHECK(windingNumbers(loop.wrapped()) == cls.windingVector());
                    }
                    CHECK(needsSignReview(H, cls) == (H.form() == ProductHamiltonian::Form::ThreeChart && u < 0 && ell != 0));
                }
            }
        }
    }
}

TEST_CASE("property: the mirror p0 -> -p0 with (u, ell) -> (-u, -ell) maps families to families")
{
    for (int n : {1, 2}) {
        for (double u : {0.0, 0.25}) {
            for (int ell : {1, 2}) {
                const PhaseSpaceConfig g(1.0, u, n);
                const PhaseSpaceConfig mirrored(1.0, -u, n);
                const double c = std::max(u * ell, 0.0) + 0.5;
                for (double s : {-2.0, -4.0}) {
                    const auto a = enumerateFamilies(innerPlateau(s, g, ell, c), HomotopyClass(ell, n));
                    const auto b = enumerateFamilies(innerPlateau(s, mirrored, -ell, c), HomotopyClass(-ell, n));
                    REQUIRE(a.size() == b.size());
                    for (std::size_t i = 0; i < a.size(); ++i) {
                        const auto &fb = b[b.size() - 1 - i];
                        CHECK(a[i].kind == fb.kind);
                        CHECK(a[i].level == doctest::Approx(-fb.level).epsilon(1e-12));
                        CHECK(a[i].action == doctest::Approx(fb.action).epsilon(1e-12));
                    }
                }
                const auto a = enumerateFamilies(outerPlateau(4.0, g, ell, c), HomotopyClass(ell, n));
                const auto b = enumerateFamilies(outerPlateau(4.0, mirrored, -ell, c), HomotopyClass(-ell, n));
                REQUIRE(a.size() == b.size());
                for (std::size_t i = 0; i < a.size(); ++i) {
                    CHECK(a[i].action == doctest::Approx(b[b.size() - 1 - i].action).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("property: the two P-family actions straddle a when f_s(0) > a > R|ell|")
{
    int cases = 0;
    for (double R : {1.0, 2.0}) {
        for (double s : {2.0, 4.0, 10.0}) {
            for (int ell : {-2, -1, 1, 2}) {
                const PhaseSpaceConfig g(R, 0.0, 1);
                const auto H = outerPlateau(s, g, ell);
                const double top = H.profile()->value(0.0);
                if (!(top > R * std::abs(ell))) {
                    continue;
                }
                const auto fams = enumerateFamilies(H, HomotopyClass(ell, 1));
                REQUIRE(fams.size() == 2u);
                const double hi = std::max(fams[0].action, fams[1].action);
                const double lo = std::min(fams[0].action, fams[1].action);
                CHECK(hi > top);
                CHECK(lo < R * std::abs(ell));
                for (double w : {0.1, 0.5, 0.9}) {
                    const double a = R * std::abs(ell) + w * (top - R * std::abs(ell));
                    CHECK(hi > a);
                    CHECK(lo < a);
                }
                ++cases;
            }
        }
    }
    CHECK(cases >= 16);
}
