#pragma once

// Phase space A_R x T^{2n}: the annulus (-R, R) x R/Z times the torus (R/2Z x R/Z)^n.
//
// Coordinates are x = (p0, q0; p1, q1, ..., pn, qn). Internally a point is a flat
// State laid out as [p0, p1, ..., pn, q0, q1, ..., qn] so that the momentum block
// and the angle block are contiguous.

#include <cstddef>
#include <span>
#include <vector>

namespace hamcap {

/// Period of every q coordinate (q0 and the torus q_i).
inline constexpr double kAnglePeriod = 1.0;
/// Period of the torus momenta p_i, i >= 1.
inline constexpr double kTorusMomentumPeriod = 2.0;

/// Geometry (R, u, n) of A_R x T^{2n} with the marked level u.
class PhaseSpaceConfig {
public:
    /// Throws InvalidConfig unless R > 0, -R < u < R and n >= 1.
    PhaseSpaceConfig(double R, double u, int n);

    double R() const noexcept { return R_; }
    double u() const noexcept { return u_; }
    int n() const noexcept { return n_; }

    /// m_u = min{1, R - |u|}, the radius scale of the bump chart around u-bar.
    double mu() const noexcept;
    /// u-bar = (u, 0, ..., 0), n+1 entries.
    std::vector<double> ubar() const;
    /// Dimension 2n+2 of the phase space.
    std::size_t stateSize() const noexcept { return static_cast<std::size_t>(2 * n_ + 2); }

    bool operator==(const PhaseSpaceConfig &) const = default;

private:
    double R_;
    double u_;
    int n_;
};

using State = std::vector<double>;

/// Index helpers for the flat State layout.
inline constexpr std::size_t pIndex(int i) noexcept { return static_cast<std::size_t>(i); }
inline constexpr std::size_t qIndex(int n, int i) noexcept { return static_cast<std::size_t>(n + 1 + i); }

struct PhasePoint {
    double p0 = 0.0;
    double q0 = 0.0;
    std::vector<double> p; // p1..pn (mod 2)
    std::vector<double> q; // q1..qn (mod 1)

    int n() const noexcept { return static_cast<int>(p.size()); }

    /// Modular coordinates reduced to [0,1) and [0,2); p0 untouched.
    PhasePoint canonical() const;

    State toState() const;
    static PhasePoint fromState(std::span<const double> x);
};

/// Reduces x to the representative in [0, period).
double wrapToPeriod(double x, double period) noexcept;
/// Reduces x to the representative in (-period/2, period/2].
double centeredRepresentative(double x, double period) noexcept;

/// Free homotopy class (alpha_ell, 0) of loops in A_R x T^{2n}.
struct HomotopyClass {
    int ell = 0;
    std::vector<int> torusWinding; // length 2n, must be zero

    /// Throws WrongClass when a nonzero torus winding is requested.
    HomotopyClass(int ell, int n);
    HomotopyClass(int ell, std::vector<int> torusWinding);

    int n() const noexcept { return static_cast<int>(torusWinding.size() / 2); }
    /// Winding vector (ell, 0, ..., 0) in the order (q0, p1, q1, ..., pn, qn).
    std::vector<int> windingVector() const;
};

/// A sampled loop with continuous lifts. lifted[k] is a flat State with every
/// coordinate real-valued; times run from 0 to 1 inclusive.
struct LoopSample {
    std::vector<double> times;
    std::vector<State> lifted;
    HomotopyClass cls;

    int n() const noexcept { return cls.n(); }
    std::size_t size() const noexcept { return times.size(); }
    /// Projects the lifts back to canonical representatives, dropping the
    /// closing sample at t = 1.
    std::vector<PhasePoint> wrapped() const;
};

/// Winding numbers of a closed sampled loop in the order (q0, p1, q1, ..., pn, qn).
///
/// The samples are treated cyclically: the jump from the last sample back to the
/// first one closes the loop. A repeated closing sample contributes a zero jump.
/// Throws AmbiguousLift when any consecutive modular jump reaches half a period.
std::vector<int> windingNumbers(std::span<const PhasePoint> loop);

/// Lifts a loop sampled at t_k = k/K (k < K) into class `cls`. The result has K+1
/// samples; the last one is the lifted start shifted by ell in q0.
/// Throws WrongClass when the loop's winding differs from (ell, 0, ..., 0).
LoopSample liftLoop(std::span<const PhasePoint> loop, const HomotopyClass &cls);

/// Builds a LoopSample from already-lifted states (for example an integrated
/// trajectory). Throws WrongClass when the endpoint differences do not match `cls`.
LoopSample loopFromLifted(std::vector<double> times, std::vector<State> lifted, const HomotopyClass &cls,
                          double tolerance = 1e-8);

} // namespace hamcap
