#pragma once

// Radial profiles f(r): piecewise cubic functions used as the radial part of
// every Hamiltonian in the library, plus the slope solver f'(r) = const.

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamcap/phase_space.hpp"

namespace hamcap {

enum class ProfileDomain {
    Normalized, // r = p0 / R or a chart radius, nominal range [-1, 1]
    Raw         // r = p0 itself, range (-R, R)
};

/// Piecewise cubic profile given by Hermite data (value and slope) on a
/// breakpoint grid. Even profiles store only r >= 0 and are evaluated at |r|.
/// Outside the breakpoint range the profile is extended by its end values.
class RadialProfile {
public:
    struct Value {
        double f = 0.0;
        double df = 0.0;
        double d2f = 0.0;
    };

    /// Hermite constructor; breakpoints must be strictly increasing, and start at
    /// 0 when evenSymmetric (with a zero slope there).
    RadialProfile(std::vector<double> breakpoints, std::vector<double> values, std::vector<double> slopes,
                  bool evenSymmetric, ProfileDomain domain, double domainLo, double domainHi);

    /// Builds the C^2 profile whose second derivative is the continuous piecewise
    /// linear interpolant of (knots, curvatures), integrated from f(knots[0]) = value0,
    /// f'(knots[0]) = slope0. `snaps` pins value/slope at selected knot indices to
    /// exact targets to absorb rounding.
    struct Snap {
        std::size_t knot;
        double value;
        double slope;
    };
    static RadialProfile fromCurvature(const std::vector<double> &knots, const std::vector<double> &curvatures,
                                       double value0, double slope0, bool evenSymmetric, ProfileDomain domain,
                                       double domainLo, double domainHi, const std::vector<Snap> &snaps = {});

    Value eval(double r) const noexcept;
    double value(double r) const noexcept { return eval(r).f; }
    double slope(double r) const noexcept { return eval(r).df; }
    double curvature(double r) const noexcept { return eval(r).d2f; }

    bool evenSymmetric() const noexcept { return even_; }
    ProfileDomain domain() const noexcept { return domain_; }
    double domainLo() const noexcept { return domainLo_; }
    double domainHi() const noexcept { return domainHi_; }
    /// Largest |r| covered by the breakpoint grid.
    double supportRadius() const noexcept;

    const std::vector<double> &breakpoints() const noexcept { return x_; }
    const std::vector<double> &values() const noexcept { return v_; }
    const std::vector<double> &slopes() const noexcept { return d_; }

    /// Breakpoints over the full signed domain (mirrored for even profiles).
    std::vector<double> signedBreakpoints() const;

    /// Largest jump of f'' across an interior breakpoint.
    double curvatureJump() const noexcept;

    /// Evaluates on the segment that owns the open interval just right (side > 0)
    /// or just left (side < 0) of r. Used to read one-sided curvatures at knots.
    Value evalOneSided(double r, int side) const noexcept;

private:
    struct Cubic {
        double c0, c1, c2, c3; // in y = x - x_i
    };

    RadialProfile() = default;
    void validateLayout() const;
    Value evalSegment(std::size_t i, double x) const noexcept;
    Value evalUnsigned(double x, int side) const noexcept;

    std::vector<double> x_;
    std::vector<double> v_;
    std::vector<double> d_;
    std::vector<Cubic> cubic_;
    bool even_ = false;
    ProfileDomain domain_ = ProfileDomain::Normalized;
    double domainLo_ = -1.0;
    double domainHi_ = 1.0;
};

enum class FamilyKind {
    BumpContractible, // contractible-class families, peak with f''(0) < 0
    PlateauOuter,     // flat-top families with s >= 1 (outer radial Hamiltonians)
    PlateauInner      // flat-top families with s <= -1 (three-chart Hamiltonians)
};

struct ProfileFamilySpec {
    FamilyKind kind = FamilyKind::PlateauOuter;
    double s = 1.0;
    double c = 1.0;
    PhaseSpaceConfig geometry{1.0, 0.0, 1};
    int ell = 1;
};

/// f_s(0) as a function of (s, c): c + s for s >= 1 and c + e^{s-1} below, which is
/// continuous, increasing, tends to c as s -> -inf and to +inf as s -> +inf.
double peakValue(double s, double c);

/// Throws InfeasibleSpec unless |s| >= 1 and c > 0.
RadialProfile buildBumpProfile(const ProfileFamilySpec &spec);
/// Throws InfeasibleSpec unless |s| >= 1 with the sign matching the kind and
/// c > max{u*ell, 0}.
RadialProfile buildPlateauProfile(const ProfileFamilySpec &spec);

/// m = max{R|ell| + u ell, a + u ell}; `a` may be -infinity.
double sharpnessLevel(const PhaseSpaceConfig &geometry, int ell, double a);

/// Compactly supported bump in raw coordinates on (-R, R) equal to m - delta
/// around u, strictly below the chord bounds by at least delta/2 and with slopes
/// strictly inside (-m/(R-u), m/(R+u)).
/// Throws InfeasibleSpec when ell = 0 and a <= 0, or delta >= m, or delta <= 0.
RadialProfile buildSharpnessProfile(const PhaseSpaceConfig &geometry, int ell, double a, double delta);

inline constexpr double kRootResidualTol = 1e-10;
inline constexpr double kDegenerateCurvature = 1e-8;

struct SlopeRoot {
    double r = 0.0;
    double curvature = 0.0;
    int secondDerivativeSign = 0; // 0 when |f''| < kDegenerateCurvature
    bool degenerate() const noexcept { return secondDerivativeSign == 0; }
};

struct SlopeRoots {
    double slope = 0.0;
    std::vector<SlopeRoot> roots;
    /// Intervals on which f' == slope identically. Each contributes a degenerate
    /// root at its midpoint as well.
    std::vector<std::pair<double, double>> flats;
    bool hasDegenerate() const noexcept;
};

/// All solutions of f'(r) = slope on [lo, hi] (default: the profile domain).
SlopeRoots solveSlope(const RadialProfile &profile, double slope);
SlopeRoots solveSlope(const RadialProfile &profile, double slope, double lo, double hi);

struct PropertyCheck {
    std::string name;
    bool applicable = true;
    bool pass = true;
    std::string detail;
};

struct ProfileReport {
    std::vector<PropertyCheck> checks;
    bool allPass() const noexcept;
    const PropertyCheck *find(const std::string &name) const noexcept;
};

/// Property report for a profile against its family specification.
/// Check names: symmetry, peak, monotone_in_s, outer_plateau, inner_plateau,
/// curvature_bands, positive_critical_points, outer_slope_roots, bump_chart_roots,
/// outer_chart_roots, c2_continuity.
ProfileReport validateProfile(const RadialProfile &profile, const ProfileFamilySpec &spec);

} // namespace hamcap
