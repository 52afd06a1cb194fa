#include "doctest.h"

#include <cmath>
#include <random>

#include "hamcap/errors.hpp"
#include "hamcap/phase_space.hpp"

using namespace hamcap;

namespace {

PhasePoint point(double p0, double q0, std::vector<double> p, std::vector<double> q)
{
    return PhasePoint{p0, q0, std::move(p), std::move(q)}.canonical();
}

// t -> (0, k t; p1 = m t mod 2, q1 = j t mod 1), K samples at t = i/K.
std::vector<PhasePoint> windingLoop(int K, int k, int m, int j)
{
    std::vector<PhasePoint> loop;
    for (int i = 0; i < K; ++i) {
        const double t = static_cast<double>(i) / K;
        loop.push_back(point(0.0, k * t, {2.0 * m * t}, {j * t}));
    }
    return loop;
}

} // namespace

TEST_CASE("config validates the geometry and derives m_u and u-bar")
{
    const PhaseSpaceConfig g(1.0, 0.3, 2);
    CHECK(g.mu() == doctest::Approx(0.7));
    CHECK(g.ubar() == std::vector<double>{0.3, 0.0, 0.0});
    CHECK(g.stateSize() == 6u);
    CHECK(PhaseSpaceConfig(3.0, 0.5, 1).mu() == 1.0);
    CHECK_THROWS_AS(PhaseSpaceConfig(0.0, 0.0, 1), InvalidConfig);
    CHECK_THROWS_AS(PhaseSpaceConfig(1.0, 1.0, 1), InvalidConfig);
    CHECK_THROWS_AS(PhaseSpaceConfig(1.0, -1.2, 1), InvalidConfig);
    CHECK_THROWS_AS(PhaseSpaceConfig(1.0, 0.0, 0), InvalidConfig);
}

TEST_CASE("canonical representatives")
{
    const auto x = PhasePoint{0.1, -0.25, {3.5}, {1.75}}.canonical();
    CHECK(x.q0 == doctest::Approx(0.75));
    CHECK(x.p[0] == doctest::Approx(1.5));
    CHECK(x.q[0] == doctest::Approx(0.75));
    CHECK(wrapToPeriod(-1e-18, 1.0) < 1.0);
    CHECK(centeredRepresentative(0.75, 1.0) == doctest::Approx(-0.25));
}

TEST_CASE("state layout round trip")
{
    const PhasePoint x{0.2, 0.3, {1.1, 0.4}, {0.5, 0.6}};
    const State s = x.toState();
    CHECK(s == State{0.2, 1.1, 0.4, 0.3, 0.5, 0.6});
    const auto y = PhasePoint::fromState(s);
    CHECK(y.p == x.p);
    CHECK(y.q == x.q);
}

TEST_CASE("winding numbers of explicit loops")
{
    std::vector<PhasePoint> constant(10, point(0.3, 0.2, {0.7}, {0.1}));
    CHECK(windingNumbers(constant) == std::vector<int>{0, 0, 0});

    CHECK(windingNumbers(windingLoop(64, 2, 0, 0)) == std::vector<int>{2, 0, 0});
    // q0 = t, p1 = 2t mod 2: one turn in q0 and one turn of the p1 circle.
    CHECK(windingNumbers(windingLoop(64, 1, 1, 0)) == std::vector<int>{1, 1, 0});
    CHECK(windingNumbers(windingLoop(64, -1, 0, 3)) == std::vector<int>{-1, 0, 3});
}

TEST_CASE("coarse sampling is rejected as ambiguous")
{
    CHECK_THROWS_AS(windingNumbers(windingLoop(2, 1, 0, 0)), AmbiguousLift);
    CHECK_THROWS_AS(windingNumbers(windingLoop(2, 0, 1, 0)), AmbiguousLift);
}

TEST_CASE("liftLoop examples")
{
    const auto loop = windingLoop(128, 1, 0, 0);
    const auto lift = liftLoop(loop, HomotopyClass(1, 1));
    REQUIRE(lift.size() == 129u);
    CHECK(lift.lifted.back()[qIndex(1, 0)] - lift.lifted.front()[qIndex(1, 0)] == doctest::Approx(1.0));
    CHECK(lift.times.back() == 1.0);

    std::vector<PhasePoint> constant(5, point(0.3, 0.2, {0.7}, {0.1}));
    const auto same = liftLoop(constant, HomotopyClass(0, 1));
    for (std::size_t k = 0; k < constant.size(); ++k) {
        CHECK(same.lifted[k] == constant[k].toState());
    }

    CHECK_THROWS_AS(liftLoop(loop, HomotopyClass(2, 1)), WrongClass);
    CHECK_THROWS_AS(liftLoop(windingLoop(64, 1, 1, 0), HomotopyClass(1, 1)), WrongClass);
    CHECK_THROWS_AS(HomotopyClass(1, std::vector<int>{0, 1}), WrongClass);
}

TEST_CASE("property: lifts re-wrap to the input, winding is rotation invariant and odd under reversal")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 2;
        const int ell = static_cast<int>(trial % 5) - 2;
        const int K = 40 + trial % 30;
        std::vector<PhasePoint> loop;
        const double phase = unit(rng);
        for (int i = 0; i < K; ++i) {
            const double t = static_cast<double>(i) / K;
            PhasePoint x;
            x.p0 = 0.5 * std::sin(2.0 * M_PI * (t + phase));
            x.q0 = ell * t + 0.1 * std::sin(2.0 * M_PI * t);
            for (int j = 0; j < n; ++j) {
                x.p.push_back(0.3 * std::cos(2.0 * M_PI * (t + j * phase)));
                x.q.push_back(0.2 * std::sin(4.0 * M_PI * t) + unit(rng) * 1e-3);
            }
            loop.push_back(x.canonical());
        }
        HomotopyClass cls(ell, n);
        const auto lift = liftLoop(loop, cls);
        const auto back = lift.wrapped();
        REQUIRE(back.size() == loop.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const auto a = back[k].toState();
            const auto b = loop[k].toState();
            for (std::size_t j = 0; j < a.size(); ++j) {
                worst = std::max(worst, std::abs(a[j] - b[j]));
            }
        }
        CHECK(worst <= 1e-12);

        const auto w = windingNumbers(loop);
        auto rotated = loop;
        std::rotate(rotated.begin(), rotated.begin() + (trial % K), rotated.end());
        CHECK(windingNumbers(rotated) == w);
        auto reversed = loop;
        std::reverse(reversed.begin(), reversed.end());
        auto negated = w;
        for (auto &v : negated) {
            v = -v;
        }
        CHECK(windingNumbers(reversed) == negated);
    }
}

TEST_CASE("loopFromLifted checks the endpoint differences")
{
    std::vector<double> t{0.0, 0.5, 1.0};
    std::vector<State> ok{{0.1, 0.0, 0.0, 0.0}, {0.1, 0.0, 0.5, 0.0}, {0.1, 0.0, 1.0, 0.0}};
    CHECK_NOTHROW(loopFromLifted(t, ok, HomotopyClass(1, 1)));
    CHECK_THROWS_AS(loopFromLifted(t, ok, HomotopyClass(2, 1)), WrongClass);
}
