#pragma once

// JSON, CSV and SVG emitters for profiles, spectra, sweeps and verifier reports,
// plus the JSON loader for Hamiltonian specs.
//
// Output is byte-stable: object keys are sorted, doubles are rounded to 12
// significant digits and infinities are written as the strings "inf" / "-inf".

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hamcap/hamiltonians.hpp"
#include "hamcap/homology_capacity.hpp"
#include "hamcap/numeric_orbits.hpp"
#include "hamcap/orbit_analysis.hpp"

namespace hamcap {

using Json = nlohmann::json;

/// Rounded number, or "inf" / "-inf" / "nan".
Json jsonNumber(double x);
/// Parses a number that may be spelled "inf", "+inf", "-inf". Throws ParseError.
double parseExtendedReal(const std::string &text);
double numberFromJson(const Json &j);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dumpJson(const Json &j);
/// Fixed 12-significant-digit text used by the CSV writers.
std::string formatNumber(double x);

Json toJson(const PhaseSpaceConfig &g);
Json toJson(const RadialProfile &f);
Json toJson(const PeriodicOrbitFamily &fam);
Json toJson(const ActionSpectrum &spec);
Json toJson(const SweepEntry &e);
Json toJson(const OracleComparison &cmp);
Json toJson(const LoopSample &loop, bool lifted);
Json toJson(const CapacityResult &cap);
Json toJson(const SharpnessReport &rep);
Json toJson(const ExistenceReport &rep);
Json toJson(const MorseCritTable &table);

struct CapacityQuery {
    PhaseSpaceConfig geometry{1.0, 0.0, 1};
    int ell = 0;
    double a = 0.0;
};

/// {query, capacityValue, sharpnessWitness, existenceWitness, orbitTable, pass}
Json verifierReport(const CapacityQuery &query, const CapacityResult &cap, const std::optional<SharpnessReport> &sharp,
                    const std::optional<ExistenceReport> &exists);

std::string spectrumCsv(const ActionSpectrum &spec);
std::string sweepCsv(const std::vector<SweepEntry> &entries);
std::string summaryCsvHeader();
std::string summaryCsvRow(const CapacityQuery &query, const CapacityResult &cap, bool pass);

/// Loads {form, geometry, profileRef | profile | grid [, s]}.
///   form: "outerRadial" | "threeChart" | "sampledGrid" | "zero"
///   geometry: {R, u, n}
///   profileRef: {kind: "bump" | "plateauOuter" | "plateauInner" | "sharpness", s, c, ell, a, delta}
///   profile: {domain, breakpoints, values, derivatives, evenSymmetric}
///   grid: {shape, values, modes: [{k, amplitude, phase}]}
/// Throws ParseError on malformed input.
ProductHamiltonian hamiltonianFromJson(const Json &spec);
RadialProfile profileFromJson(const Json &j);

struct ProfilePlot {
    const RadialProfile *profile = nullptr;
    double slope = 0.0;     // slope of the tangent lines; roots of f' = slope are annotated
    double lo = -1.0;
    double hi = 1.0;
    std::string title;
    int samples = 400;
};

/// Two stacked panels (f and f') with the tangent lines at every root of f' = slope.
std::string profileSvg(const ProfilePlot &plot);

} // namespace hamcap
