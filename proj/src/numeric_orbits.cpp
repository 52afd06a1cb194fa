#include "hamcap/numeric_orbits.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "hamcap/errors.hpp"

namespace hamcap {

void IntegratorConfig::validate() const
{
    if (stepCount < 16) {
        throw InvalidConfig("stepCount must be at least 16");
    }
    if (!(newtonTol > 0.0) || newtonMaxIter < 1) {
        throw InvalidConfig("inner solver tolerance and iteration cap must be positive");
    }
}

const char *statusName(ShootingStatus status) noexcept
{
    switch (status) {
    case ShootingStatus::Converged:
        return "converged";
    case ShootingStatus::SingularJacobian:
        return "singular_jacobian";
    case ShootingStatus::LineSearchFailed:
        return "line_search_failed";
    case ShootingStatus::MaxIterations:
        return "max_iterations";
    case ShootingStatus::WrongWinding:
        return "wrong_winding";
    case ShootingStatus::IntegrationFailed:
        return "integration_failed";
    }
    return "?";
}

namespace {

double maxAbsDiff(const double *a, const double *b, std::size_t dim)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

// One implicit-midpoint step y = x + h X((x + y)/2, t + h/2). Fixed-point
// iteration first (exact in two sweeps for q-independent fields, whose
// Jacobian is nilpotent); Newton with a finite-difference Jacobian otherwise.
class MidpointStepper {
public:
    MidpointStepper(const ProductHamiltonian &H, const IntegratorConfig &config)
        : H_(H), config_(config), dim_(H.geometry().stateSize()), mid_(dim_), v_(dim_), next_(dim_)
    {
    }

    void step(const double *x, double t, double h, double *y)
    {
        const double tm = t + 0.5 * h;
        H_.field(x, tm, v_.data());
        for (std::size_t i = 0; i < dim_; ++i) {
            y[i] = x[i] + h * v_[i];
        }
        for (int it = 0; it < config_.newtonMaxIter; ++it) {
            for (std::size_t i = 0; i < dim_; ++i) {
                mid_[i] = 0.5 * (x[i] + y[i]);
            }
            H_.field(mid_.data(), tm, v_.data());
            for (std::size_t i = 0; i < dim_; ++i) {
                next_[i] = x[i] + h * v_[i];
            }
            const double change = maxAbsDiff(next_.data(), y, dim_);
            std::copy(next_.begin(), next_.end(), y);
            if (change <= config_.newtonTol) {
                return;
            }
        }
        newton(x, tm, h, y);
    }

private:
    void residual(const double *x, double tm, double h, const double *y, Eigen::VectorXd &F)
    {
        for (std::size_t i = 0; i < dim_; ++i) {
            mid_[i] = 0.5 * (x[i] + y[i]);
        }
        H_.field(mid_.data(), tm, v_.data());
        for (std::size_t i = 0; i < dim_; ++i) {
            F[static_cast<Eigen::Index>(i)] = y[i] - x[i] - h * v_[i];
        }
    }

    void newton(const double *x, double tm, double h, double *y)
    {
        const auto n = static_cast<Eigen::Index>(dim_);
        Eigen::VectorXd F(n), Fp(n);
        Eigen::MatrixXd J(n, n);
        std::vector<double> yp(dim_);
        for (int it = 0; it < config_.newtonMaxIter; ++it) {
            residual(x, tm, h, y, F);
            if (F.cwiseAbs().maxCoeff() <= config_.newtonTol) {
                return;
            }
            for (Eigen::Index j = 0; j < n; ++j) {
                std::copy(y, y + dim_, yp.begin());
                const double eps = 1e-7 * std::max(1.0, std::abs(y[j]));
                yp[static_cast<std::size_t>(j)] += eps;
                residual(x, tm, h, yp.data(), Fp);
                J.col(j) = (Fp - F) / eps;
            }
            const Eigen::VectorXd dy = J.partialPivLu().solve(-F);
            if (!dy.allFinite()) {
                break;
            }
            for (std::size_t i = 0; i < dim_; ++i) {
                y[i] += dy[static_cast<Eigen::Index>(i)];
            }
            if (dy.cwiseAbs().maxCoeff() <= config_.newtonTol) {
                return;
            }
        }
        throw NewtonDivergence("implicit midpoint step did not converge at t = " + std::to_string(tm));
    }

    const ProductHamiltonian &H_;
    const IntegratorConfig &config_;
    std::size_t dim_;
    std::vector<double> mid_, v_, next_;
};

State flowEndpoint(const ProductHamiltonian &H, const State &x0, const IntegratorConfig &config)
{
    MidpointStepper stepper(H, config);
    const double h = 1.0 / config.stepCount;
    State x = x0;
    State y(x.size());
    for (int k = 0; k < config.stepCount; ++k) {
        stepper.step(x.data(), k * h, h, y.data());
        std::swap(x, y);
    }
    return x;
}

State shootingResidual(const ProductHamiltonian &H, int ell, const State &x, const IntegratorConfig &config)
{
    State G = flowEndpoint(H, x, config);
    for (std::size_t i = 0; i < G.size(); ++i) {
        G[i] -= x[i];
    }
    G[qIndex(H.n(), 0)] -= ell;
    return G;
}

double norm2(const State &v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

double normInf(const State &v)
{
    double s = 0.0;
    for (double x : v) {
        s = std::max(s, std::abs(x));
    }
    return s;
}

Eigen::MatrixXd residualJacobian(const ProductHamiltonian &H, int ell, const State &x, const State &G,
                                 const IntegratorConfig &config)
{
    const auto dim = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd J(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        State xp = x;
        const double eps = 1e-7 * std::max(1.0, std::abs(x[static_cast<std::size_t>(j)]));
        xp[static_cast<std::size_t>(j)] += eps;
        const State Gp = shootingResidual(H, ell, xp, config);
        for (Eigen::Index i = 0; i < dim; ++i) {
            J(i, j) = (Gp[static_cast<std::size_t>(i)] - G[static_cast<std::size_t>(i)]) / eps;
        }
    }
    return J;
}

} // namespace

Trajectory integrateFlow(const ProductHamiltonian &H, const PhasePoint &x0, const IntegratorConfig &config)
{
    config.validate();
    MidpointStepper stepper(H, config);
    const double h = 1.0 / config.stepCount;
    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(config.stepCount + 1));
    traj.points.reserve(static_cast<std::size_t>(config.stepCount + 1));
    traj.times.push_back(0.0);
    traj.points.push_back(x0.toState());
    for (int k = 0; k < config.stepCount; ++k) {
        State y(traj.points.back().size());
        stepper.step(traj.points.back().data(), k * h, h, y.data());
        traj.times.push_back(static_cast<double>(k + 1) / config.stepCount);
        traj.points.push_back(std::move(y));
    }
    return traj;
}

State timeOneMap(const ProductHamiltonian &H, const State &x0, const IntegratorConfig &config)
{
    config.validate();
    return flowEndpoint(H, x0, config);
}

Eigen::MatrixXd timeOneJacobian(const ProductHamiltonian &H, const State &x0, const IntegratorConfig &config,
                                double step)
{
    config.validate();
    const auto dim = static_cast<Eigen::Index>(x0.size());
    Eigen::MatrixXd J(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        State up = x0;
        State down = x0;
        up[static_cast<std::size_t>(j)] += step;
        down[static_cast<std::size_t>(j)] -= step;
        const State a = flowEndpoint(H, up, config);
        const State b = flowEndpoint(H, down, config);
        for (Eigen::Index i = 0; i < dim; ++i) {
            J(i, j) = (a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) / (2.0 * step);
        }
    }
    return J;
}

double loopAction(const ProductHamiltonian &H, const LoopSample &loop)
{
    const std::size_t K = loop.size();
    if (K < 2) {
        throw InvalidConfig("loop needs at least two samples");
    }
    const int n = loop.n();
    double hIntegral = 0.0;
    double area = 0.0;
    double hPrev = H.value(loop.lifted[0].data(), loop.times[0]);
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const auto &a = loop.lifted[k];
        const auto &b = loop.lifted[k + 1];
        const double hNext = H.value(b.data(), loop.times[k + 1]);
        hIntegral += 0.5 * (hPrev + hNext) * (loop.times[k + 1] - loop.times[k]);
        hPrev = hNext;
        for (int i = 0; i <= n; ++i) {
            const auto p = pIndex(i);
            const auto q = qIndex(n, i);
            area += 0.5 * (a[p] + b[p]) * (b[q] - a[q]);
        }
    }
    return hIntegral - area;
}

int kernelDimension(const ProductHamiltonian &H, const State &x, const IntegratorConfig &config)
{
    Eigen::MatrixXd J = timeOneJacobian(H, x, config);
    J -= Eigen::MatrixXd::Identity(J.rows(), J.cols());
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto &sv = svd.singularValues();
    return static_cast<int>((sv.array() < kKernelThreshold).count());
}

ShootingResult shootPeriodicOrbit(const ProductHamiltonian &H, const HomotopyClass &cls, const PhasePoint &seed,
                                  const IntegratorConfig &config)
{
    config.validate();
    const auto &g = H.geometry();
    if (cls.n() != g.n() || seed.n() != g.n()) {
        throw WrongClass("class or seed dimension does not match the phase space");
    }
    const int ell = cls.ell;
    ShootingResult result;
    result.orbit = LoopSample{{}, {}, cls};

    State x = seed.toState();
    State G;
    try {
        G = shootingResidual(H, ell, x, config);
    } catch (const Error &) {
        result.status = ShootingStatus::IntegrationFailed;
        return result;
    }
    double gNorm = norm2(G);
    result.status = ShootingStatus::MaxIterations;
    for (int iter = 0; iter <= config.newtonMaxIter; ++iter) {
        result.iterations = iter;
        if (normInf(G) <= kShootingTol) {
            result.status = ShootingStatus::Converged;
            break;
        }
        if (iter == config.newtonMaxIter) {
            break;
        }
        Eigen::MatrixXd J;
        try {
            J = residualJacobian(H, ell, x, G, config);
        } catch (const Error &) {
            result.status = ShootingStatus::IntegrationFailed;
            break;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        if (!(top > 1e-10)) {
            result.status = ShootingStatus::SingularJacobian;
            break;
        }
        svd.setThreshold(std::max(1e-7, 1e-8 / top));
        const Eigen::Map<const Eigen::VectorXd> gv(G.data(), static_cast<Eigen::Index>(G.size()));
        const Eigen::VectorXd dx = svd.solve(-gv);
        if (!dx.allFinite() || dx.norm() < 1e-15) {
            result.status = ShootingStatus::SingularJacobian;
            break;
        }
        bool accepted = false;
        double lambda = 1.0;
        for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
            State trial = x;
            for (std::size_t i = 0; i < x.size(); ++i) {
                trial[i] += lambda * dx[static_cast<Eigen::Index>(i)];
            }
            if (std::abs(trial[0]) >= g.R()) {
                continue;
            }
            State Gt;
            try {
                Gt = shootingResidual(H, ell, trial, config);
            } catch (const Error &) {
                continue;
            }
            const double tNorm = norm2(Gt);
            if (tNorm < (1.0 - 1e-4 * lambda) * gNorm) {
                x = std::move(trial);
                G = std::move(Gt);
                gNorm = tNorm;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            result.status = ShootingStatus::LineSearchFailed;
            break;
        }
    }
    result.residual = normInf(G);
    if (result.status != ShootingStatus::Converged) {
        return result;
    }

    PhasePoint start = PhasePoint::fromState(x);
    Trajectory traj = integrateFlow(H, start, config);
    try {
        result.orbit = loopFromLifted(std::move(traj.times), std::move(traj.points), cls);
        const auto w = windingNumbers(result.orbit.wrapped());
        if (w != cls.windingVector()) {
            result.status = ShootingStatus::WrongWinding;
            return result;
        }
    } catch (const AmbiguousLift &) {
        result.status = ShootingStatus::WrongWinding;
        return result;
    } catch (const WrongClass &) {
        result.status = ShootingStatus::WrongWinding;
        return result;
    }
    double levelSum = 0.0;
    for (std::size_t k = 0; k + 1 < result.orbit.size(); ++k) {
        levelSum += result.orbit.lifted[k][0];
    }
    result.level = levelSum / static_cast<double>(result.orbit.size() - 1);
    result.action = loopAction(H, result.orbit);
    result.converged = true;
    return result;
}

// ---------------------------------------------------------------------------
// Sweeps

std::uint64_t rngSeedFromEnvironment(std::uint64_t fallback)
{
    if (const char *env = std::getenv("HAMCAP_SEED")) {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && end != env) {
            return static_cast<std::uint64_t>(v);
        }
        throw InvalidConfig(std::string("HAMCAP_SEED is not an unsigned integer: ") + env);
    }
    return fallback;
}

std::vector<PhasePoint> seedLattice(const ProductHamiltonian &H, int count)
{
    const auto &g = H.geometry();
    const int n = g.n();
    // Torus patterns: all zero, then +-1/2 along one axis at a time.
    const int patterns = 2 * n + 1;
    const int rows = std::max(1, (count + patterns - 1) / patterns);
    std::vector<PhasePoint> seeds;
    seeds.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const int row = k / patterns;
        const int pattern = k % patterns;
        PhasePoint x;
        x.p0 = -g.R() + (row + 0.5) * 2.0 * g.R() / rows;
        x.q0 = H.qIndependent() ? 0.0 : 0.25 * (row % 4);
        x.p.assign(static_cast<std::size_t>(n), 0.0);
        x.q.assign(static_cast<std::size_t>(n), 0.0);
        if (pattern > 0) {
            x.p[static_cast<std::size_t>((pattern - 1) / 2)] = pattern % 2 ? 0.5 : -0.5;
        }
        seeds.push_back(std::move(x));
    }
    return seeds;
}

std::vector<PhasePoint> randomSeeds(const PhaseSpaceConfig &geometry, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<PhasePoint> seeds;
    seeds.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        PhasePoint x;
        x.p0 = geometry.R() * (2.0 * unit(rng) - 1.0);
        x.q0 = unit(rng);
        for (int i = 0; i < geometry.n(); ++i) {
            x.p.push_back(2.0 * unit(rng) - 1.0);
            x.q.push_back(unit(rng));
        }
        seeds.push_back(std::move(x));
    }
    return seeds;
}

std::vector<SweepEntry> shootingSweep(const ProductHamiltonian &H, const HomotopyClass &cls,
                                      const std::vector<PhasePoint> &seeds, const SweepOptions &options)
{
    options.integrator.validate();
    std::vector<SweepEntry> entries(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < seeds.size(); k = next++) {
            SweepEntry &e = entries[k];
            e.seed = k;
            ShootingResult r;
            try {
                r = shootPeriodicOrbit(H, cls, seeds[k], options.integrator);
            } catch (const SingularPoint &) {
                e.status = ShootingStatus::IntegrationFailed;
                continue;
            } catch (const NewtonDivergence &) {
                e.status = ShootingStatus::IntegrationFailed;
                continue;
            }
            e.converged = r.converged;
            e.status = r.status;
            e.residual = r.residual;
            if (!r.converged) {
                continue;
            }
            e.level = r.level;
            e.action = r.action;
            e.start = r.orbit.lifted.front();
            e.winding = windingNumbers(r.orbit.wrapped());
            if (options.kernel) {
                e.kernelDim = kernelDimension(H, e.start, options.integrator);
            }
        }
    };
    unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size())));
    if (threads <= 1) {
        worker();
        return entries;
    }
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    pool.clear();
    return entries;
}

std::vector<OrbitCluster> clusterOrbits(const std::vector<SweepEntry> &entries, double tolerance)
{
    std::vector<const SweepEntry *> hits;
    for (const auto &e : entries) {
        if (e.converged) {
            hits.push_back(&e);
        }
    }
    std::sort(hits.begin(), hits.end(), [](const SweepEntry *a, const SweepEntry *b) {
        return a->level < b->level || (a->level == b->level && a->seed < b->seed);
    });
    std::vector<OrbitCluster> clusters;
    double anchor = 0.0;
    double bestResidual = 0.0;
    for (const SweepEntry *e : hits) {
        if (clusters.empty() || e->level - anchor > tolerance) {
            clusters.push_back({e->level, e->action, e->kernelDim, 0, e->seed});
            anchor = e->level;
            bestResidual = e->residual;
        }
        auto &c = clusters.back();
        ++c.count;
        if (e->residual < bestResidual) {
            bestResidual = e->residual;
            c.level = e->level;
            c.action = e->action;
            c.kernelDim = e->kernelDim;
            c.seed = e->seed;
        }
    }
    return clusters;
}

bool OracleComparison::pass() const noexcept
{
    return missing.empty() && extra.empty() && kernelMismatches == 0 && worstLevelError <= tolerance &&
           worstActionError <= tolerance;
}

OracleComparison compareWithAnalytic(const std::vector<PeriodicOrbitFamily> &families,
                                     const std::vector<SweepEntry> &entries, const HomotopyClass &cls,
                                     double tolerance)
{
    constexpr double kMatchRadius = 1e-4;
    OracleComparison cmp;
    cmp.tolerance = tolerance;
    for (const auto &c : clusterOrbits(entries, kMatchRadius)) {
        if (cls.ell != 0 || c.action > kContractibleActionFloor) {
            cmp.clusters.push_back(c);
        }
    }
    std::vector<bool> used(families.size(), false);
    for (const auto &c : cmp.clusters) {
        std::size_t best = families.size();
        double bestGap = kMatchRadius;
        for (std::size_t i = 0; i < families.size(); ++i) {
            const double gap = std::abs(families[i].level - c.level);
            if (gap <= bestGap) {
                best = i;
                bestGap = gap;
            }
        }
        if (best == families.size()) {
            cmp.extra.push_back(c);
            continue;
        }
        if (!used[best]) {
            used[best] = true;
            ++cmp.matched;
        }
        const auto &fam = families[best];
        cmp.worstLevelError = std::max(cmp.worstLevelError, bestGap);
        cmp.worstActionError = std::max(cmp.worstActionError, std::abs(fam.action - c.action));
        if (c.kernelDim >= 0 && fam.morseBott && c.kernelDim != fam.dimension) {
            ++cmp.kernelMismatches;
        }
    }
    for (std::size_t i = 0; i < families.size(); ++i) {
        if (!used[i]) {
            cmp.missing.push_back(i);
        }
    }
    return cmp;
}

} // namespace hamcap
