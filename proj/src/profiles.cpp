#include "hamcap/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "hamcap/errors.hpp"

namespace hamcap {

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(std::vector<double> breakpoints, std::vector<double> values, std::vector<double> slopes,
                             bool evenSymmetric, ProfileDomain domain, double domainLo, double domainHi)
    : x_(std::move(breakpoints)), v_(std::move(values)), d_(std::move(slopes)), even_(evenSymmetric),
      domain_(domain), domainLo_(domainLo), domainHi_(domainHi)
{
    validateLayout();
    cubic_.reserve(x_.size() - 1);
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const double h = x_[i + 1] - x_[i];
        const double delta = (v_[i + 1] - v_[i]) / h;
        cubic_.push_back({v_[i], d_[i], (3.0 * delta - 2.0 * d_[i] - d_[i + 1]) / h,
                          (d_[i] + d_[i + 1] - 2.0 * delta) / (h * h)});
    }
}

void RadialProfile::validateLayout() const
{
    if (x_.size() < 2 || v_.size() != x_.size() || d_.size() != x_.size()) {
        throw InvalidConfig("profile needs at least two breakpoints with matching values and slopes");
    }
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw InvalidConfig("profile breakpoints must be strictly increasing");
        }
    }
    if (even_ && (x_.front() != 0.0 || d_.front() != 0.0)) {
        throw InvalidConfig("even profile must start at r = 0 with zero slope");
    }
    if (!(domainLo_ < domainHi_)) {
        throw InvalidConfig("profile domain must be a nonempty interval");
    }
}

RadialProfile RadialProfile::fromCurvature(const std::vector<double> &knots, const std::vector<double> &curvatures,
                                           double value0, double slope0, bool evenSymmetric, ProfileDomain domain,
                                           double domainLo, double domainHi, const std::vector<Snap> &snaps)
{
    if (knots.size() < 2 || curvatures.size() != knots.size()) {
        throw InvalidConfig("curvature data needs matching knots and values");
    }
    RadialProfile p;
    p.x_ = knots;
    p.v_.resize(knots.size());
    p.d_.resize(knots.size());
    p.even_ = evenSymmetric;
    p.domain_ = domain;
    p.domainLo_ = domainLo;
    p.domainHi_ = domainHi;

    double V = value0;
    double S = slope0;
    p.v_[0] = V;
    p.d_[0] = S;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double h = knots[i + 1] - knots[i];
        const double k0 = curvatures[i];
        const double k1 = curvatures[i + 1];
        p.cubic_.push_back({V, S, 0.5 * k0, (k1 - k0) / (6.0 * h)});
        V += S * h + h * h * (2.0 * k0 + k1) / 6.0;
        S += 0.5 * (k0 + k1) * h;
        for (const auto &snap : snaps) {
            if (snap.knot == i + 1) {
                V = snap.value;
                S = snap.slope;
            }
        }
        p.v_[i + 1] = V;
        p.d_[i + 1] = S;
    }
    p.validateLayout();
    return p;
}

RadialProfile::Value RadialProfile::evalSegment(std::size_t i, double x) const noexcept
{
    const auto &c = cubic_[i];
    const double y = x - x_[i];
    return {c.c0 + y * (c.c1 + y * (c.c2 + y * c.c3)), c.c1 + y * (2.0 * c.c2 + 3.0 * y * c.c3),
            2.0 * c.c2 + 6.0 * y * c.c3};
}

RadialProfile::Value RadialProfile::evalUnsigned(double x, int side) const noexcept
{
    if (x < x_.front() || (x == x_.front() && side < 0 && !even_)) {
        return {v_.front(), 0.0, 0.0};
    }
    if (x > x_.back() || (x == x_.back() && side > 0)) {
        return {v_.back(), 0.0, 0.0};
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    // x_[i-1] <= x < x_[i]; a left-sided query at a knot belongs to the previous segment.
    i = (i == 0) ? 0 : i - 1;
    if (side < 0 && x == x_[i] && i > 0) {
        --i;
    }
    if (i >= cubic_.size()) {
        i = cubic_.size() - 1;
    }
    return evalSegment(i, x);
}

RadialProfile::Value RadialProfile::eval(double r) const noexcept
{
    return evalOneSided(r, +1);
}

RadialProfile::Value RadialProfile::evalOneSided(double r, int side) const noexcept
{
    if (!even_) {
        return evalUnsigned(r, side);
    }
    if (r >= 0.0) {
        return evalUnsigned(r, r == 0.0 ? +1 : side);
    }
    Value v = evalUnsigned(-r, -side);
    v.df = -v.df;
    return v;
}

double RadialProfile::supportRadius() const noexcept
{
    return std::max(std::abs(x_.front()), std::abs(x_.back()));
}

std::vector<double> RadialProfile::signedBreakpoints() const
{
    if (!even_) {
        return x_;
    }
    std::vector<double> out;
    out.reserve(2 * x_.size() - 1);
    for (std::size_t i = x_.size() - 1; i >= 1; --i) {
        out.push_back(-x_[i]);
    }
    out.insert(out.end(), x_.begin(), x_.end());
    return out;
}

double RadialProfile::curvatureJump() const noexcept
{
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
        const double left = evalSegment(i - 1, x_[i]).d2f;
        const double right = evalSegment(i, x_[i]).d2f;
        worst = std::max(worst, std::abs(left - right));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Family construction

double peakValue(double s, double c)
{
    return s >= 1.0 ? c + s : c + std::exp(s - 1.0);
}

namespace {

// Accumulates a continuous piecewise linear f'' starting at r = 0.
class CurvatureBuilder {
public:
    CurvatureBuilder(double r0, double value0) : value0_(value0)
    {
        knots_.push_back(r0);
        curv_.push_back(0.0);
    }

    double end() const { return knots_.back(); }

    void flatTo(double r)
    {
        if (r > knots_.back()) {
            add(r, 0.0);
        }
    }

    // C^2 monotone descent from level `from` to level `to` over [end, end + w] with
    // f'' < 0 on the first half and f'' > 0 on the second half (scaled shape g).
    void transition(double w, double from, double to)
    {
        static constexpr std::array<double, 4> offsets{0.25, 0.5, 0.75, 1.0};
        static constexpr std::array<double, 4> shape{-8.0, 0.0, 8.0, 0.0};
        const double r0 = knots_.back();
        const double scale = (from - to) / (w * w);
        for (std::size_t j = 0; j < offsets.size(); ++j) {
            add(r0 + offsets[j] * w, scale * shape[j]);
        }
        snaps_.push_back({knots_.size() - 1, to, 0.0});
    }

    // Constant curvature k from the current end to r (requires the current end
    // curvature to be k as well, which holds at the start).
    void constantCurvature(double r, double k)
    {
        curv_.back() = k;
        add(r, k);
    }

    // C^2 join from the current state (V0, S0, K0) at the end to (V1, 0, 0) at end + w.
    // f'' is piecewise linear on four equal pieces; the three interior curvatures are
    // the minimum-norm solution of the slope and value constraints.
    void blend(double w, double V0, double S0, double V1)
    {
        const double K0 = curv_.back();
        const double eta = 0.25 * w;
        // Row A: eta (k1 + k2 + k3) = -S0 - K0 eta / 2
        // Row B: eta^2 (3 k1 + 2 k2 + k3) = V1 - V0 - S0 w - K0 (eta w / 2 - eta^2 / 6)
        const std::array<double, 3> a{eta, eta, eta};
        const std::array<double, 3> b{3.0 * eta * eta, 2.0 * eta * eta, eta * eta};
        const double ra = -S0 - K0 * eta / 2.0;
        const double rb = V1 - V0 - S0 * w - K0 * (eta * w / 2.0 - eta * eta / 6.0);
        double aa = 0.0, ab = 0.0, bb = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            aa += a[j] * a[j];
            ab += a[j] * b[j];
            bb += b[j] * b[j];
        }
        const double det = aa * bb - ab * ab;
        const double la = (bb * ra - ab * rb) / det;
        const double lb = (aa * rb - ab * ra) / det;
        const double r0 = knots_.back();
        for (std::size_t j = 0; j < 3; ++j) {
            add(r0 + static_cast<double>(j + 1) * eta, la * a[j] + lb * b[j]);
        }
        add(r0 + w, 0.0);
        snaps_.push_back({knots_.size() - 1, V1, 0.0});
    }

    RadialProfile finish(bool even, ProfileDomain domain, double lo, double hi) const
    {
        return RadialProfile::fromCurvature(knots_, curv_, value0_, 0.0, even, domain, lo, hi, snaps_);
    }

private:
    void add(double r, double k)
    {
        knots_.push_back(r);
        curv_.push_back(k);
    }

    double value0_;
    std::vector<double> knots_;
    std::vector<double> curv_;
    std::vector<RadialProfile::Snap> snaps_;
};

void requireRegime(double s)
{
    if (!std::isfinite(s) || std::abs(s) < 1.0) {
        throw InfeasibleSpec("family parameter s must satisfy |s| >= 1, got " + std::to_string(s));
    }
}

} // namespace

RadialProfile buildBumpProfile(const ProfileFamilySpec &spec)
{
    if (spec.kind != FamilyKind::BumpContractible) {
        throw InfeasibleSpec("buildBumpProfile needs a BumpContractible spec");
    }
    requireRegime(spec.s);
    if (!(spec.c > 0.0)) {
        throw InfeasibleSpec("bump family needs c > 0");
    }
    const double s = spec.s;
    const double P = peakValue(s, spec.c);
    CurvatureBuilder b(0.0, P);
    if (s >= 1.0) {
        const double r0 = 1.0 - 1.0 / (4.0 * s);
        const double r1 = 1.0 - 1.0 / (8.0 * s);
        b.constantCurvature(r0, -2.0 * P);
        b.blend(r1 - r0, P * (1.0 - r0 * r0), -2.0 * P * r0, 0.0);
    } else {
        const double a = -s;
        const double r0 = 1.0 / (8.0 * a);
        b.constantCurvature(r0, -2.0 * P);
        b.blend(r0, P * (1.0 - r0 * r0), -2.0 * P * r0, s);
        b.flatTo(1.0 - 1.0 / (4.0 * a));
        b.transition(1.0 / (8.0 * a), s, 0.0);
    }
    return b.finish(true, ProfileDomain::Normalized, -1.0, 1.0);
}

RadialProfile buildPlateauProfile(const ProfileFamilySpec &spec)
{
    requireRegime(spec.s);
    if (spec.kind == FamilyKind::PlateauOuter && spec.s < 1.0) {
        throw InfeasibleSpec("PlateauOuter needs s >= 1");
    }
    if (spec.kind == FamilyKind::PlateauInner && spec.s > -1.0) {
        throw InfeasibleSpec("PlateauInner needs s <= -1");
    }
    if (spec.kind == FamilyKind::BumpContractible) {
        throw InfeasibleSpec("buildPlateauProfile needs a plateau spec");
    }
    const double ul = spec.geometry.u() * spec.ell;
    if (!(spec.c > std::max(ul, 0.0))) {
        throw InfeasibleSpec("plateau family needs c > max{u*ell, 0}");
    }
    const double s = spec.s;
    const double P = peakValue(s, spec.c);
    CurvatureBuilder b(0.0, P);
    if (s >= 1.0) {
        b.flatTo(1.0 - 3.0 / (8.0 * s));
        b.transition(2.0 / (8.0 * s), P, 0.0);
    } else {
        const double a = -s;
        b.flatTo(1.0 / (8.0 * a));
        b.transition(2.0 / (8.0 * a), P, s);
        b.flatTo(1.0 - 3.0 / (8.0 * a));
        b.transition(2.0 / (8.0 * a), s, 0.0);
    }
    return b.finish(true, ProfileDomain::Normalized, -1.0, 1.0);
}

double sharpnessLevel(const PhaseSpaceConfig &geometry, int ell, double a)
{
    const double R = geometry.R();
    const double ul = geometry.u() * ell;
    const double first = R * std::abs(ell) + ul;
    if (std::isinf(a) && a < 0.0) {
        return first;
    }
    return std::max(first, a + ul);
}

RadialProfile buildSharpnessProfile(const PhaseSpaceConfig &geometry, int ell, double a, double delta)
{
    if (ell == 0 && a <= 0.0) {
        throw InfeasibleSpec("ell = 0 with a <= 0 has no sharpness witness (capacity is 0)");
    }
    const double m = sharpnessLevel(geometry, ell, a);
    if (!(delta > 0.0) || !(delta < m)) {
        throw InfeasibleSpec("delta must satisfy 0 < delta < m = " + std::to_string(m));
    }
    const double R = geometry.R();
    const double u = geometry.u();
    const double A = (R + u) / m;
    const double B = (R - u) / m;
    const double sigmaL = m / ((R + u) * (1.0 + delta / (8.0 * m)));
    const double sigmaR = m / ((R - u) * (1.0 + delta / (8.0 * m)));
    const double rhoL = std::min(delta * A / 8.0, (m - delta) * A / 4.0);
    const double rhoR = std::min(delta * B / 8.0, (m - delta) * B / 4.0);
    const double lenL = (m - delta) / sigmaL - rhoL;
    const double lenR = (m - delta) / sigmaR - rhoR;
    const double leftZero = -R + delta * A / 2.0;
    const double rightZero = R - delta * B / 2.0;
    const double rightStart = rightZero - 2.0 * rhoR - lenR;

    std::vector<double> knots;
    std::vector<double> curv;
    auto add = [&](double r, double k) {
        knots.push_back(r);
        curv.push_back(k);
    };
    add(leftZero, 0.0);
    add(leftZero + 0.5 * rhoL, 2.0 * sigmaL / rhoL);
    add(leftZero + rhoL, 0.0);
    add(leftZero + rhoL + lenL, 0.0);
    add(leftZero + 1.5 * rhoL + lenL, -2.0 * sigmaL / rhoL);
    add(leftZero + 2.0 * rhoL + lenL, 0.0);
    const std::size_t topKnot = knots.size() - 1;
    if (!(rightStart > knots.back() && knots.back() < u && rightStart > u)) {
        throw InfeasibleSpec("sharpness plateau does not contain u");
    }
    add(rightStart, 0.0);
    add(rightStart + 0.5 * rhoR, -2.0 * sigmaR / rhoR);
    add(rightStart + rhoR, 0.0);
    add(rightStart + rhoR + lenR, 0.0);
    add(rightStart + 1.5 * rhoR + lenR, 2.0 * sigmaR / rhoR);
    add(rightZero, 0.0);

    const std::vector<RadialProfile::Snap> snaps{{topKnot, m - delta, 0.0},
                                                 {topKnot + 1, m - delta, 0.0},
                                                 {knots.size() - 1, 0.0, 0.0}};
    return RadialProfile::fromCurvature(knots, curv, 0.0, 0.0, false, ProfileDomain::Raw, -R, R, snaps);
}

// ---------------------------------------------------------------------------
// Slope equation

bool SlopeRoots::hasDegenerate() const noexcept
{
    return std::any_of(roots.begin(), roots.end(), [](const SlopeRoot &r) { return r.degenerate(); });
}

namespace {

constexpr double kEndpointZero = 1e-13;
constexpr double kFlatTol = 1e-12;

struct PieceEval {
    const RadialProfile &profile;
    double a;
    double b;
    double slope;

    RadialProfile::Value at(double x) const
    {
        const int side = (x < 0.5 * (a + b)) ? +1 : -1;
        return profile.evalOneSided(x, side);
    }
    double g(double x) const { return at(x).df - slope; }
};

int curvatureSign(double k)
{
    if (std::abs(k) < kDegenerateCurvature) {
        return 0;
    }
    return k > 0.0 ? 1 : -1;
}

SlopeRoot makeRoot(const PieceEval &pe, double r)
{
    const double k = pe.at(r).d2f;
    return {r, k, curvatureSign(k)};
}

// Root of g on [x0, x1] where g is monotone and changes sign.
double polishRoot(const PieceEval &pe, double x0, double x1, double g0)
{
    double lo = x0;
    double hi = x1;
    double glo = g0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const auto v = pe.at(x);
        const double gx = v.df - pe.slope;
        if (gx == 0.0) {
            return x;
        }
        if ((gx > 0.0) == (glo > 0.0)) {
            lo = x;
            glo = gx;
        } else {
            hi = x;
        }
        double next = (v.d2f != 0.0) ? x - gx / v.d2f : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-17 + 2e-16 * std::abs(x) || hi - lo <= 4e-16 * (1.0 + std::abs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    // Report whichever of the final candidates has the smallest residual.
    double best = x;
    double bestRes = std::abs(pe.g(x));
    for (double cand : {lo, hi}) {
        const double res = std::abs(pe.g(cand));
        if (res < bestRes) {
            best = cand;
            bestRes = res;
        }
    }
    return best;
}

void scanMonotone(const PieceEval &pe, double x0, double x1, std::vector<SlopeRoot> &roots)
{
    if (!(x1 > x0)) {
        return;
    }
    const double g0 = pe.g(x0);
    const double g1 = pe.g(x1);
    if (std::abs(g0) <= kEndpointZero) {
        roots.push_back(makeRoot(pe, x0));
    }
    if (std::abs(g1) <= kEndpointZero) {
        roots.push_back(makeRoot(pe, x1));
    }
    if (std::abs(g0) > kEndpointZero && std::abs(g1) > kEndpointZero && (g0 > 0.0) != (g1 > 0.0)) {
        roots.push_back(makeRoot(pe, polishRoot(pe, x0, x1, g0)));
    }
}

} // namespace

SlopeRoots solveSlope(const RadialProfile &profile, double slope)
{
    return solveSlope(profile, slope, profile.domainLo(), profile.domainHi());
}

SlopeRoots solveSlope(const RadialProfile &profile, double slope, double lo, double hi)
{
    if (!(hi > lo)) {
        throw InvalidConfig("slope search interval must be nonempty");
    }
    std::vector<double> cuts{lo, hi};
    for (double x : profile.signedBreakpoints()) {
        if (x > lo && x < hi) {
            cuts.push_back(x);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    SlopeRoots out;
    out.slope = slope;
    std::vector<SlopeRoot> raw;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        const PieceEval pe{profile, a, b, slope};
        const auto va = pe.at(a);
        const auto vb = pe.at(b);
        const double mid = 0.5 * (a + b);
        if (std::abs(va.df - slope) <= kFlatTol && std::abs(vb.df - slope) <= kFlatTol &&
            std::abs(pe.g(mid)) <= kFlatTol && std::abs(va.d2f) <= 1e-9 && std::abs(vb.d2f) <= 1e-9) {
            if (!out.flats.empty() && out.flats.back().second == a) {
                out.flats.back().second = b;
            } else {
                out.flats.emplace_back(a, b);
            }
            continue;
        }
        // f'' is linear on the piece, so g is monotone on each side of its zero.
        if ((va.d2f > 0.0 && vb.d2f < 0.0) || (va.d2f < 0.0 && vb.d2f > 0.0)) {
            const double z = a + (b - a) * va.d2f / (va.d2f - vb.d2f);
            scanMonotone(pe, a, z, raw);
            scanMonotone(pe, z, b, raw);
            if (std::abs(pe.g(z)) <= kFlatTol) {
                raw.push_back(makeRoot(pe, z));
            }
        } else {
            scanMonotone(pe, a, b, raw);
        }
    }

    auto insideFlat = [&](double r) {
        return std::any_of(out.flats.begin(), out.flats.end(),
                           [&](const auto &f) { return r >= f.first - 1e-9 && r <= f.second + 1e-9; });
    };
    std::sort(raw.begin(), raw.end(), [](const SlopeRoot &x, const SlopeRoot &y) { return x.r < y.r; });
    for (const auto &root : raw) {
        if (insideFlat(root.r)) {
            continue;
        }
        if (!out.roots.empty() && std::abs(out.roots.back().r - root.r) <= 1e-9) {
            continue;
        }
        out.roots.push_back(root);
    }
    for (const auto &f : out.flats) {
        const double mid = 0.5 * (f.first + f.second);
        out.roots.push_back({mid, 0.0, 0});
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const SlopeRoot &x, const SlopeRoot &y) { return x.r < y.r; });
    return out;
}

// ---------------------------------------------------------------------------
// Validation

bool ProfileReport::allPass() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck &c) { return !c.applicable || c.pass; });
}

const PropertyCheck *ProfileReport::find(const std::string &name) const noexcept
{
    for (const auto &c : checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

namespace {

constexpr double kValueTol = 1e-9;
constexpr double kSignTol = 1e-12;

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

// Samples k points on the open interval (a, b).
template <class F>
bool allOpen(double a, double b, int k, F &&pred, double *worst = nullptr)
{
    bool ok = true;
    for (int j = 0; j < k; ++j) {
        const double r = a + (b - a) * (static_cast<double>(j) + 0.5) / static_cast<double>(k);
        if (!pred(r)) {
            ok = false;
            if (worst) {
                *worst = r;
            }
            break;
        }
    }
    return ok;
}

// Samples k+1 points on the closed interval [a, b].
template <class F>
bool allClosed(double a, double b, int k, F &&pred, double *worst = nullptr)
{
    for (int j = 0; j <= k; ++j) {
        const double r = (j == k) ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(k);
        if (!pred(r)) {
            if (worst) {
                *worst = r;
            }
            return false;
        }
    }
    return true;
}

PropertyCheck check(std::string name, bool pass, std::string detail = {})
{
    return {std::move(name), true, pass, std::move(detail)};
}

PropertyCheck notApplicable(std::string name, std::string why)
{
    return {std::move(name), false, true, std::move(why)};
}

RadialProfile neighbour(const ProfileFamilySpec &spec, double s)
{
    ProfileFamilySpec other = spec;
    other.s = s;
    if (spec.kind == FamilyKind::BumpContractible) {
        return buildBumpProfile(other);
    }
    return buildPlateauProfile(other);
}

PropertyCheck checkMonotoneInS(const RadialProfile &f, const ProfileFamilySpec &spec)
{
    constexpr double ds = 0.5;
    double lowerS = spec.s;
    double upperS = spec.s + ds;
    // Stay inside the regime of the spec: s in [1, inf) or (-inf, -1].
    if (spec.s <= -1.0 && upperS > -1.0) {
        lowerS = spec.s - ds;
        upperS = spec.s;
    }
    try {
        const RadialProfile other = neighbour(spec, lowerS == spec.s ? upperS : lowerS);
        const RadialProfile &lower = (lowerS == spec.s) ? f : other;
        const RadialProfile &upper = (lowerS == spec.s) ? other : f;
        double bad = 0.0;
        const bool ok = allClosed(
            -1.0, 1.0, 2000, [&](double r) { return lower.value(r) <= upper.value(r) + kSignTol; }, &bad);
        return check("monotone_in_s", ok,
                     ok ? "f_{" + fmt(lowerS) + "} <= f_{" + fmt(upperS) + "} on 2001 points"
                        : "violated at r = " + fmt(bad));
    } catch (const Error &e) {
        return check("monotone_in_s", false, e.what());
    }
}

} // namespace

ProfileReport validateProfile(const RadialProfile &f, const ProfileFamilySpec &spec)
{
    ProfileReport report;
    auto &out = report.checks;
    const double s = spec.s;
    const double a = std::abs(s);
    const double P = f.value(0.0);
    const bool bump = spec.kind == FamilyKind::BumpContractible;
    const int absEll = std::abs(spec.ell);

    // (i) symmetry
    {
        double worst = 0.0;
        for (int j = 0; j <= 1000; ++j) {
            const double r = -1.0 + 2.0 * j / 1000.0;
            worst = std::max(worst, std::abs(f.value(-r) - f.value(r)));
        }
        out.push_back(check("symmetry", worst <= 1e-12, "max |f(-r) - f(r)| = " + fmt(worst)));
    }

    // (ii) peak value, plus f''(0) < 0 for the contractible families
    {
        bool ok = P > spec.c;
        std::string detail = "f(0) = " + fmt(P) + ", c = " + fmt(spec.c);
        if (bump) {
            const double k = f.curvature(0.0);
            ok = ok && k < 0.0;
            detail += ", f''(0) = " + fmt(k);
        }
        out.push_back(check("peak", ok, detail));
    }

    // (iii) monotone in s
    if (std::abs(s) >= 1.0) {
        out.push_back(checkMonotoneInS(f, spec));
    } else {
        out.push_back(notApplicable("monotone_in_s", "|s| < 1"));
    }

    // (iv) s >= 1
    if (s >= 1.0) {
        const double flatEnd = bump ? 1.0 - 1.0 / (4.0 * s) : 1.0 - 3.0 / (8.0 * s);
        const double zeroStart = 1.0 - 1.0 / (8.0 * s);
        double bad = 0.0;
        bool ok = allClosed(0.0, flatEnd, 1000, [&](double r) {
            const double target = bump ? P * (1.0 - r * r) : P;
            return std::abs(f.value(r) - target) <= kValueTol;
        }, &bad);
        std::string detail = ok ? "" : "top band fails at r = " + fmt(bad) + "; ";
        const bool zero = allClosed(zeroStart, 1.0, 200, [&](double r) { return std::abs(f.value(r)) <= kValueTol; },
                                    &bad);
        if (!zero) {
            detail += "outer zero band fails at r = " + fmt(bad) + "; ";
        }
        const bool decreasing = allClosed(0.0, 1.0, 4000, [&](double r) { return f.slope(r) <= kSignTol; }, &bad);
        if (!decreasing) {
            detail += "f' > 0 at r = " + fmt(bad);
        }
        out.push_back(check("outer_plateau", ok && zero && decreasing, detail));
    } else {
        out.push_back(notApplicable("outer_plateau", "s < 1"));
    }

    // (v) s <= -1
    if (s <= -1.0) {
        const double topEnd = 1.0 / (8.0 * a);
        const double midStart = bump ? 1.0 / (4.0 * a) : 3.0 / (8.0 * a);
        const double midEnd = bump ? 1.0 - 1.0 / (4.0 * a) : 1.0 - 3.0 / (8.0 * a);
        const double zeroStart = 1.0 - 1.0 / (8.0 * a);
        double bad = 0.0;
        std::string detail;
        const bool top = allClosed(0.0, topEnd, 200, [&](double r) {
            const double target = bump ? P * (1.0 - r * r) : P;
            return std::abs(f.value(r) - target) <= kValueTol;
        }, &bad);
        if (!top) {
            detail += "top band fails at r = " + fmt(bad) + "; ";
        }
        const bool mid = allClosed(midStart, midEnd, 1000, [&](double r) { return std::abs(f.value(r) - s) <= kValueTol; },
                                   &bad);
        if (!mid) {
            detail += "plateau s fails at r = " + fmt(bad) + "; ";
        }
        const bool zero = allClosed(zeroStart, 1.0, 200, [&](double r) { return std::abs(f.value(r)) <= kValueTol; },
                                    &bad);
        if (!zero) {
            detail += "outer zero band fails at r = " + fmt(bad) + "; ";
        }
        const bool down = allClosed(0.0, 0.5, 2000, [&](double r) { return f.slope(r) <= kSignTol; }, &bad);
        if (!down) {
            detail += "f' > 0 at r = " + fmt(bad) + "; ";
        }
        const bool up = allClosed(0.5, 1.0, 2000, [&](double r) { return f.slope(r) >= -kSignTol; }, &bad);
        if (!up) {
            detail += "f' < 0 at r = " + fmt(bad);
        }
        out.push_back(check("inner_plateau", top && mid && zero && down && up, detail));
    } else {
        out.push_back(notApplicable("inner_plateau", "s > -1"));
    }

    // Curvature sign pattern on the transition bands of the plateau families.
    if (!bump) {
        double lo = 0.0;
        if (s >= 1.0) {
            lo = 1.0 - 3.0 / (8.0 * s);
        } else {
            lo = 1.0 / (8.0 * a);
        }
        const double w = 1.0 / (8.0 * a);
        double bad = 0.0;
        const bool neg = allOpen(lo, lo + w, 400, [&](double r) { return f.curvature(r) < 0.0; }, &bad);
        const bool pos = neg && allOpen(lo + w, lo + 2.0 * w, 400, [&](double r) { return f.curvature(r) > 0.0; }, &bad);
        out.push_back(check("curvature_bands", neg && pos, (neg && pos) ? "" : "sign fails at r = " + fmt(bad)));
    } else {
        out.push_back(notApplicable("curvature_bands", "contractible family has no curvature bands"));
    }

    // Contractible families: the only critical point with positive value is r = 0.
    if (bump) {
        const auto crit = solveSlope(f, 0.0, -1.0, 1.0);
        bool ok = true;
        bool sawZero = false;
        std::string detail;
        for (const auto &root : crit.roots) {
            if (std::abs(root.r) <= 1e-9) {
                sawZero = true;
                continue;
            }
            if (f.value(root.r) > 0.0) {
                ok = false;
                detail += "positive critical point at r = " + fmt(root.r) + "; ";
            }
        }
        for (const auto &flat : crit.flats) {
            if (f.value(0.5 * (flat.first + flat.second)) > 0.0) {
                ok = false;
                detail += "positive flat [" + fmt(flat.first) + ", " + fmt(flat.second) + "]; ";
            }
        }
        if (!sawZero) {
            ok = false;
            detail += "r = 0 is not critical";
        }
        out.push_back(check("positive_critical_points", ok, detail));
    } else {
        out.push_back(notApplicable("positive_critical_points", "plateau families"));
    }

    // Outer family, s >= 1: exactly two roots r' < r < 0 of f' = R|ell|.
    const double R = spec.geometry.R();
    if (!bump && s >= 1.0 && absEll != 0 && P > R * absEll) {
        const auto roots = solveSlope(f, R * absEll, -1.0, 1.0);
        bool ok = roots.roots.size() == 2 && roots.flats.empty();
        if (ok) {
            const auto &rp = roots.roots[0];
            const auto &r = roots.roots[1];
            ok = rp.r < r.r && r.r < 0.0 && r.secondDerivativeSign < 0 && rp.secondDerivativeSign > 0;
        }
        out.push_back(check("outer_slope_roots", ok, std::to_string(roots.roots.size()) + " roots of f' = " + fmt(R * absEll)));
    } else {
        out.push_back(notApplicable("outer_slope_roots", "needs s >= 1, ell != 0 and f(0) > R|ell|"));
    }

    // Inner family, s <= -1: two roots of f' = m_u|ell| on the bump chart |r| <= 1/2,
    // and every positive root of f' = (R - |u|)|ell| has f < 0.
    if (!bump && s <= -1.0 && absEll != 0) {
        const double mu = spec.geometry.mu();
        const auto roots = solveSlope(f, mu * absEll, -0.5, 0.5);
        bool ok = roots.roots.size() == 2 && roots.flats.empty();
        if (ok) {
            const auto &rp = roots.roots[0];
            const auto &r = roots.roots[1];
            ok = rp.r < r.r && r.r < 0.0 && r.secondDerivativeSign < 0 && rp.secondDerivativeSign > 0;
        }
        out.push_back(check("bump_chart_roots", ok,
                            std::to_string(roots.roots.size()) + " roots of f' = " + fmt(mu * absEll) + " on [-1/2, 1/2]"));

        const double slope = (R - std::abs(spec.geometry.u())) * absEll;
        const auto outer = solveSlope(f, slope, 0.0, 1.0);
        bool negative = outer.flats.empty();
        std::string detail = std::to_string(outer.roots.size()) + " positive roots of f' = " + fmt(slope);
        for (const auto &root : outer.roots) {
            if (root.r > 0.0 && !(f.value(root.r) < 0.0)) {
                negative = false;
                detail += "; f(" + fmt(root.r) + ") = " + fmt(f.value(root.r));
            }
        }
        out.push_back(check("outer_chart_roots", negative, detail));
    } else {
        out.push_back(notApplicable("bump_chart_roots", "needs s <= -1 and ell != 0"));
        out.push_back(notApplicable("outer_chart_roots", "needs s <= -1 and ell != 0"));
    }

    {
        const double jump = f.curvatureJump();
        out.push_back(check("c2_continuity", jump <= 1e-9, "max f'' jump = " + fmt(jump)));
    }
    return report;
}

} // namespace hamcap
