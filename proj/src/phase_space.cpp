#include "hamcap/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hamcap/errors.hpp"

namespace hamcap {

PhaseSpaceConfig::PhaseSpaceConfig(double R, double u, int n) : R_(R), u_(u), n_(n)
{
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw InvalidConfig("R must be a positive finite number, got " + std::to_string(R));
    }
    if (!(u > -R && u < R)) {
        throw InvalidConfig("u must lie strictly inside (-R, R)");
    }
    if (n < 1) {
        throw InvalidConfig("n must be at least 1");
    }
}

double PhaseSpaceConfig::mu() const noexcept
{
    return std::min(1.0, R_ - std::abs(u_));
}

std::vector<double> PhaseSpaceConfig::ubar() const
{
    std::vector<double> out(static_cast<std::size_t>(n_ + 1), 0.0);
    out[0] = u_;
    return out;
}

double wrapToPeriod(double x, double period) noexcept
{
    double r = std::fmod(x, period);
    if (r < 0.0) {
        r += period;
    }
    // fmod of a tiny negative number can round up to exactly `period`.
    if (r >= period) {
        r = 0.0;
    }
    return r;
}

double centeredRepresentative(double x, double period) noexcept
{
    double r = x - period * std::round(x / period);
    if (r <= -0.5 * period) {
        r += period;
    }
    return r;
}

PhasePoint PhasePoint::canonical() const
{
    PhasePoint out = *this;
    out.q0 = wrapToPeriod(q0, kAnglePeriod);
    for (auto &v : out.p) {
        v = wrapToPeriod(v, kTorusMomentumPeriod);
    }
    for (auto &v : out.q) {
        v = wrapToPeriod(v, kAnglePeriod);
    }
    return out;
}

State PhasePoint::toState() const
{
    const int dim = n();
    State x(static_cast<std::size_t>(2 * dim + 2));
    x[pIndex(0)] = p0;
    x[qIndex(dim, 0)] = q0;
    for (int i = 1; i <= dim; ++i) {
        x[pIndex(i)] = p[static_cast<std::size_t>(i - 1)];
        x[qIndex(dim, i)] = q[static_cast<std::size_t>(i - 1)];
    }
    return x;
}

PhasePoint PhasePoint::fromState(std::span<const double> x)
{
    const int dim = static_cast<int>(x.size() / 2) - 1;
    PhasePoint out;
    out.p0 = x[pIndex(0)];
    out.q0 = x[qIndex(dim, 0)];
    out.p.resize(static_cast<std::size_t>(dim));
    out.q.resize(static_cast<std::size_t>(dim));
    for (int i = 1; i <= dim; ++i) {
        out.p[static_cast<std::size_t>(i - 1)] = x[pIndex(i)];
        out.q[static_cast<std::size_t>(i - 1)] = x[qIndex(dim, i)];
    }
    return out;
}

HomotopyClass::HomotopyClass(int ell_, int n) : ell(ell_), torusWinding(static_cast<std::size_t>(2 * n), 0) {}

HomotopyClass::HomotopyClass(int ell_, std::vector<int> winding) : ell(ell_), torusWinding(std::move(winding))
{
    if (torusWinding.size() % 2 != 0) {
        throw WrongClass("torus winding vector must have even length 2n");
    }
    if (std::any_of(torusWinding.begin(), torusWinding.end(), [](int w) { return w != 0; })) {
        throw WrongClass("only classes with zero torus winding are representable");
    }
}

std::vector<int> HomotopyClass::windingVector() const
{
    std::vector<int> out(torusWinding.size() + 1, 0);
    out[0] = ell;
    return out;
}

namespace {

// Coordinates in winding order (q0, p1, q1, ..., pn, qn) with their periods.
struct ModularCoordinate {
    double value;
    double period;
};

std::vector<ModularCoordinate> modularCoordinates(const PhasePoint &x)
{
    std::vector<ModularCoordinate> out;
    out.reserve(1 + 2 * x.p.size());
    out.push_back({x.q0, kAnglePeriod});
    for (std::size_t i = 0; i < x.p.size(); ++i) {
        out.push_back({x.p[i], kTorusMomentumPeriod});
        out.push_back({x.q[i], kAnglePeriod});
    }
    return out;
}

double shortestJump(double from, double to, double period, std::size_t sample)
{
    const double d = centeredRepresentative(to - from, period);
    if (std::abs(d) >= 0.5 * period * (1.0 - 1e-12)) {
        throw AmbiguousLift("jump of " + std::to_string(to - from) + " at sample " + std::to_string(sample) +
                            " is at least half the period " + std::to_string(period));
    }
    return d;
}

void checkDimensions(std::span<const PhasePoint> loop)
{
    if (loop.empty()) {
        throw InvalidConfig("loop has no samples");
    }
    const auto n = loop.front().p.size();
    for (const auto &x : loop) {
        if (x.p.size() != n || x.q.size() != n) {
            throw InvalidConfig("loop samples have inconsistent torus dimension");
        }
    }
}

} // namespace

std::vector<int> windingNumbers(std::span<const PhasePoint> loop)
{
    checkDimensions(loop);
    const std::size_t K = loop.size();
    const std::size_t m = 1 + 2 * loop.front().p.size();
    std::vector<double> total(m, 0.0);
    std::vector<double> periods;
    for (std::size_t k = 0; k < K; ++k) {
        const auto a = modularCoordinates(loop[k]);
        const auto b = modularCoordinates(loop[(k + 1) % K]);
        for (std::size_t j = 0; j < m; ++j) {
            total[j] += shortestJump(a[j].value, b[j].value, a[j].period, k);
        }
        if (periods.empty()) {
            for (const auto &c : a) {
                periods.push_back(c.period);
            }
        }
    }
    std::vector<int> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = static_cast<int>(std::lround(total[j] / periods[j]));
    }
    return out;
}

LoopSample liftLoop(std::span<const PhasePoint> loop, const HomotopyClass &cls)
{
    const auto winding = windingNumbers(loop);
    if (winding != cls.windingVector()) {
        std::string got;
        for (int w : winding) {
            got += std::to_string(w) + " ";
        }
        throw WrongClass("loop winding (" + got + ") does not match class ell=" + std::to_string(cls.ell));
    }
    const std::size_t K = loop.size();
    const int n = loop.front().n();

    LoopSample out{{}, {}, cls};
    out.times.resize(K + 1);
    out.lifted.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        out.times[k] = static_cast<double>(k) / static_cast<double>(K);
    }
    out.lifted[0] = loop[0].toState();
    for (std::size_t k = 1; k < K; ++k) {
        const State prevRaw = loop[k - 1].toState();
        const State raw = loop[k].toState();
        State x = raw;
        const State &prev = out.lifted[k - 1];
        x[pIndex(0)] = raw[pIndex(0)];
        for (int i = 0; i <= n; ++i) {
            const auto qi = qIndex(n, i);
            x[qi] = prev[qi] + shortestJump(prevRaw[qi], raw[qi], kAnglePeriod, k);
            if (i >= 1) {
                const auto pi = pIndex(i);
                x[pi] = prev[pi] + shortestJump(prevRaw[pi], raw[pi], kTorusMomentumPeriod, k);
            }
        }
        out.lifted[k] = std::move(x);
    }
    State closing = out.lifted[0];
    closing[qIndex(n, 0)] += static_cast<double>(cls.ell) * kAnglePeriod;
    out.lifted[K] = std::move(closing);
    return out;
}

LoopSample loopFromLifted(std::vector<double> times, std::vector<State> lifted, const HomotopyClass &cls,
                          double tolerance)
{
    if (times.size() != lifted.size() || times.size() < 2) {
        throw InvalidConfig("lifted loop needs matching times and at least two samples");
    }
    if (times.front() != 0.0 || times.back() != 1.0) {
        throw InvalidConfig("lifted loop times must start at 0 and end at 1");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw InvalidConfig("lifted loop times must be strictly increasing");
        }
    }
    const State &a = lifted.front();
    const State &b = lifted.back();
    const int n = static_cast<int>(a.size() / 2) - 1;
    if (n != cls.n()) {
        throw WrongClass("loop dimension does not match class dimension");
    }
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double expected = (j == qIndex(n, 0)) ? static_cast<double>(cls.ell) : 0.0;
        if (std::abs((b[j] - a[j]) - expected) > tolerance) {
            throw WrongClass("lifted endpoint difference in coordinate " + std::to_string(j) + " is " +
                             std::to_string(b[j] - a[j]) + ", expected " + std::to_string(expected));
        }
    }
    return LoopSample{std::move(times), std::move(lifted), cls};
}

std::vector<PhasePoint> LoopSample::wrapped() const
{
    std::vector<PhasePoint> out;
    out.reserve(lifted.size() - 1);
    for (std::size_t k = 0; k + 1 < lifted.size(); ++k) {
        out.push_back(PhasePoint::fromState(lifted[k]).canonical());
    }
    return out;
}

} // namespace hamcap
