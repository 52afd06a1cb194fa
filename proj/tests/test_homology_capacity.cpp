#include "doctest.h"

#include <cmath>
#include <limits>

#include "hamcap/errors.hpp"
#include "hamcap/homology_capacity.hpp"
#include "oracles.hpp"

using namespace hamcap;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Reduced Betti numbers of T^n convolved with the Betti numbers of T^{n+1}.
long long kunnethOracle(int n, int k)
{
    const auto bn = oracle::torusBetti(n);
    const auto bn1 = oracle::torusBetti(n + 1);
    long long sum = 0;
    for (int i = 1; i <= n; ++i) {
        const int j = k - i;
        if (j >= 0 && j <= n + 1) {
            sum += static_cast<long long>(bn[static_cast<std::size_t>(i)]) * bn1[static_cast<std::size_t>(j)];
        }
    }
    return sum;
}

ProductHamiltonian existenceHamiltonian(const PhaseSpaceConfig &g, double s, int ell)
{
    const double c = std::max(g.R() * std::abs(ell) + g.u() * ell, 0.0) + 0.5;
    if (ell == 0) {
        return ProductHamiltonian::threeChart(g, buildBumpProfile({FamilyKind::BumpContractible, s, c, g, 0}), s);
    }
    return ProductHamiltonian::threeChart(g, buildPlateauProfile({FamilyKind::PlateauInner, s, c, g, ell}), s);
}

IntegratorConfig coarse()
{
    IntegratorConfig cfg;
    cfg.stepCount = 16;
    return cfg;
}

} // namespace

TEST_CASE("betti numbers of tori")
{
    CHECK(betti(1).dims == std::vector<long long>{1, 1});
    CHECK(betti(3).dims == std::vector<long long>{1, 3, 3, 1});
    CHECK(betti(3)[7] == 0);
    CHECK_THROWS_AS(betti(0), InvalidConfig);
    for (int m = 1; m <= 7; ++m) {
        const auto b = betti(m);
        const auto ref = oracle::torusBetti(m);
        CHECK(b.total() == (1LL << m));
        for (int k = 0; k <= m; ++k) {
            CHECK(b[k] == ref[static_cast<std::size_t>(k)]);
        }
    }
}

TEST_CASE("Morse critical point tables")
{
    const auto ft = morseCritTable(MorseFunction::FT, 1);
    CHECK(ft.points.size() == 8u);
    CHECK(ft.minValue == -3.0);
    CHECK(ft.gammaValue == 0.0);
    CHECK(ft.indexCounts() == std::vector<long long>{1, 3, 3, 1});

    const auto fm = morseCritTable(MorseFunction::FminusT, 2);
    CHECK(fm.points.size() == 8u);
    CHECK(std::isnan(fm.gammaValue));
    CHECK(fm.indexCounts() == std::vector<long long>{1, 3, 3, 1});
    CHECK_THROWS_AS(morseCritTable(MorseFunction::FT, 0), InvalidConfig);

    // gamma: p = 0, q = 1/2
    CHECK(evalMorseFunction(MorseFunction::FT, 2, {0.0, 0.0, 0.5, 0.5, 0.5}) == doctest::Approx(0.0));
    CHECK(evalMorseFunction(MorseFunction::FT, 2, {1.0, 1.0, 0.5, 0.5, 0.5}) == doctest::Approx(-8.0));
}

TEST_CASE("property: critical points are critical, indices match the torus Betti numbers")
{
    for (auto fn : {MorseFunction::FT, MorseFunction::FminusT}) {
        for (int n = 1; n <= 3; ++n) {
            const auto table = morseCritTable(fn, n);
            const int m = fn == MorseFunction::FT ? 2 * n + 1 : n + 1;
            CHECK(table.points.size() == (std::size_t{1} << m));
            const auto counts = table.indexCounts();
            const auto ref = oracle::torusBetti(m);
            for (int k = 0; k <= m; ++k) {
                CHECK(counts[static_cast<std::size_t>(k)] == ref[static_cast<std::size_t>(k)]);
            }
            for (const auto &pt : table.points) {
                CHECK(evalMorseFunction(fn, n, pt.coordinates) == doctest::Approx(pt.value).epsilon(1e-12));
                CHECK(pt.value >= table.minValue);
                // Zero gradient and the index from the sign of each diagonal second difference.
                const double h = 1e-4;
                int negative = 0;
                for (std::size_t j = 0; j < pt.coordinates.size(); ++j) {
                    auto up = pt.coordinates;
                    auto dn = pt.coordinates;
                    up[j] += h;
                    dn[j] -= h;
                    const double fu = evalMorseFunction(fn, n, up);
                    const double fd = evalMorseFunction(fn, n, dn);
                    CHECK(std::abs(fu - fd) / (2 * h) <= 1e-8);
                    if (fu + fd - 2 * pt.value < 0) {
                        ++negative;
                    }
                }
                CHECK(negative == pt.index);
            }
        }
    }
}

TEST_CASE("homology dimension examples")
{
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    CHECK(shDims(g, 1, 0.5, 1) == 0);
    CHECK(shDims(g, 1, 1.5, 1) == 3);
    CHECK(shDims(g, 0, 0.5, 3) == 1);
    CHECK_THROWS_AS(shDims(g, 0, 0.0, 0), InvalidInterval);
    CHECK_THROWS_AS(shDims(g, 0, -kInf, 0), InvalidInterval);
    CHECK(shDims(g, 2, -kInf, 0) == 0);

    CHECK(rshDims(g, 1, 0.5, 2.0, 1) == 2);
    CHECK(rshDims(g, 1, 2.5, 2.0, 1) == 0);
    CHECK_THROWS_AS(rshDims(g, 1, 0.5, 0.0, 0), InvalidHypothesis);
    CHECK_THROWS_AS(rshDims(g, 1, -1.0, 2.0, 0), InvalidInterval);
    CHECK_THROWS_AS(rshDims(PhaseSpaceConfig(1.0, 0.5, 1), 2, 0.5, 1.0, 0), InvalidHypothesis);

    CHECK(tMapRank(g, 1, 1.5, 3.0, 2) == 1);
    CHECK(tMapRank(g, 1, 0.5, 3.0, 2) == 0);
    CHECK(tMapRank(g, 1, 1.5, 3.0, 3) == 0);

    CHECK(claim6Dims(1, 0) == 0);
    CHECK(claim6Dims(1, 1) == 1);
    CHECK(claim6Dims(1, 2) == 2);
    CHECK(claim6Dims(1, 3) == 1);
    CHECK_THROWS_AS(claim6Dims(1, 4), InvalidConfig);
}

TEST_CASE("property: the dimension tables are consistent for n <= 3")
{
    for (int n = 1; n <= 3; ++n) {
        for (int k = 0; k <= 2 * n + 1; ++k) {
            CHECK(claim6Dims(n, k) == kunnethOracle(n, k));
            CHECK(reducedKunnethSum(n, k) == kunnethOracle(n, k));
        }
        for (double R : {0.5, 1.0, 2.0}) {
            for (double u : {-R / 2, 0.0, R / 2}) {
                const PhaseSpaceConfig g(R, u, n);
                for (int ell = -2; ell <= 2; ++ell) {
                    for (double c : {std::max(u * ell, 0.0) + 0.25, R * std::abs(ell) + std::abs(u * ell) + 2.0}) {
                        for (double a : {0.1, 0.5 * R, R * std::abs(ell) + 0.5, c - u * ell, c - u * ell + 0.1}) {
                            if (a <= 0.0) {
                                continue;
                            }
                            const bool window = R * std::abs(ell) < a && a <= c - u * ell;
                            long long rankSum = 0;
                            for (int k = 0; k <= 2 * n + 1; ++k) {
                                const long long sh = shDims(g, ell, a, k);
                                const long long rsh = rshDims(g, ell, a, c, k);
                                const long long t = tMapRank(g, ell, a, c, k);
                                CHECK(t <= std::min(sh, rsh));
                                rankSum += t;
                                if (window) {
                                    CHECK(t == rsh);
                                    // The quotient in the exact sequence.
                                    CHECK(sh - t == (k == 0 ? 0 : claim6Dims(n, k)));
                                }
                            }
                            CHECK(rankSum == (window ? (1LL << (n + 1)) : 0));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("capacity formula examples")
{
    CHECK(capacityFormula(PhaseSpaceConfig(1.0, 0.0, 1), 2, -kInf).value == 2.0);
    CHECK(capacityFormula(PhaseSpaceConfig(2.0, 1.0, 1), -1, 5.0).value == 4.0);
    CHECK(capacityFormula(PhaseSpaceConfig(1.0, 0.0, 1), 0, -1.0).value == 0.0);
    CHECK(capacityFormula(PhaseSpaceConfig(1.0, 0.5, 1), 0, 0.7).value == 0.7);
    const auto inf = capacityFormula(PhaseSpaceConfig(1.0, 0.0, 2), 1, 0.5, {0, 1});
    CHECK(inf.infinite);
    CHECK(std::isinf(inf.value));
    CHECK_FALSE(capacityFormula(PhaseSpaceConfig(1.0, 0.0, 2), 1, 0.5, {0, 0}).infinite);
}

TEST_CASE("property: capacity is monotone in a and continuous across a = R|ell|")
{
    for (double u : {-0.5, 0.0, 0.5}) {
        const PhaseSpaceConfig g(1.0, u, 1);
        for (int ell = -2; ell <= 2; ++ell) {
            double prev = -kInf;
            for (double a = -3.0; a <= 4.0; a += 0.125) {
                if (ell == 0 && a <= 0.0) {
                    continue;
                }
                const double v = capacityFormula(g, ell, a).value;
                CHECK(v >= prev);
                prev = v;
            }
            if (ell != 0) {
                const double edge = std::abs(ell) * 1.0;
                CHECK(capacityFormula(g, ell, -kInf).value == doctest::Approx(capacityFormula(g, ell, edge).value));
            }
        }
    }
}

TEST_CASE("verifySharpness examples")
{
    SharpnessOptions opts;
    opts.seedCount = 300;
    opts.integrator = coarse();
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    const auto rep = verifySharpness(g, 1, -kInf, 0.1, opts);
    CHECK(rep.pass);
    CHECK(rep.level == 1.0);
    CHECK(rep.markedInfimum == doctest::Approx(0.9));
    CHECK(rep.compactSupport);
    CHECK(rep.supportRadius < 1.0);
    CHECK(rep.analyticViolations == 0u);
    CHECK(rep.numericConverged == 0u);

    const auto high = verifySharpness(PhaseSpaceConfig(2.0, 1.0, 1), -1, 5.0, 0.2, opts);
    CHECK(high.level == 4.0);
    CHECK(high.pass);
    CHECK(high.numericViolations == 0u);

    const auto zero = verifySharpness(g, 0, 0.5, 0.1, opts);
    CHECK(zero.pass);
}

TEST_CASE("verifyExistence examples")
{
    const PhaseSpaceConfig g(1.0, 0.3, 1);
    const auto H = existenceHamiltonian(g, -2.0, 1);
    const auto rep = verifyExistence(H, 1);
    CHECK(rep.status == ExistenceStatus::Verified);
    CHECK(rep.pass);
    REQUIRE(rep.witness);
    CHECK(rep.witness->kind == OrbitKind::Q);
    CHECK(rep.witnessAction >= rep.bound);
    CHECK(rep.numericConverged);
    CHECK(rep.levelAgreement <= 1e-6);
    CHECK(rep.actionAgreement <= 1e-6);
    CHECK(rep.bettiBound == 4);
    REQUIRE(rep.perturbationCount);
    CHECK(*rep.perturbationCount >= rep.bettiBound);
    CHECK_FALSE(rep.signReview);
    CHECK(std::string(statusName(rep.status)) == "verified");

    CHECK_THROWS_AS(verifyExistence(ProductHamiltonian::zero(g), 1), InvalidHypothesis);

    const auto review = verifyExistence(existenceHamiltonian(PhaseSpaceConfig(1.0, -0.3, 1), -2.0, 1), 1);
    CHECK(review.signReview);

    ExistenceOptions opts;
    opts.seedBudget = 2000;
    const auto blend = ProductHamiltonian::timeBlend(g, {H, H});
    const auto numeric = verifyExistence(blend, 1, opts);
    CHECK(numeric.seedsUsed == 2000u);
    CHECK_FALSE(numeric.witness);
    CHECK(numeric.status == ExistenceStatus::Verified);
    CHECK(numeric.numericAction >= numeric.bound - 1e-6);
}

TEST_CASE("property: existence holds across classes, shifts and profiles")
{
    for (int n : {1, 2}) {
        for (double u : {0.0, 0.3, -0.3}) {
            const PhaseSpaceConfig g(1.0, u, n);
            for (int ell = -2; ell <= 2; ++ell) {
                for (double s : {-2.0, -4.0}) {
                    const auto rep = verifyExistence(existenceHamiltonian(g, s, ell), ell);
                    CHECK(rep.pass);
                    CHECK(rep.c >= std::max(std::abs(ell) + u * ell, 0.0));
                    CHECK(rep.witnessAction >= rep.bound - 1e-6);
                    CHECK(rep.bettiBound == (1LL << (n + 1)));
                }
            }
        }
    }
}
