#include "doctest.h"

#include <cmath>
#include <limits>

#include "hamcap/errors.hpp"
#include "hamcap/report_io.hpp"

using namespace hamcap;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::size_t count(const std::string &text, const std::string &needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

} // namespace

TEST_CASE("numbers round to 12 significant digits and infinities are strings")
{
    CHECK(jsonNumber(0.1 + 0.2).dump() == "0.3");
    CHECK(jsonNumber(1.0 / 3.0).dump() == "0.333333333333");
    CHECK(jsonNumber(kInf).dump() == "\"inf\"");
    CHECK(jsonNumber(-kInf).dump() == "\"-inf\"");
    CHECK(jsonNumber(-0.0).dump() == "0.0");
    CHECK(formatNumber(2.0) == "2");
    CHECK(formatNumber(-kInf) == "-inf");

    CHECK(parseExtendedReal("-inf") == -kInf);
    CHECK(parseExtendedReal("1.5") == 1.5);
    CHECK_THROWS_AS(parseExtendedReal("1.5x"), ParseError);
    CHECK_THROWS_AS(parseExtendedReal("nan"), ParseError);
    CHECK(numberFromJson(Json("-inf")) == -kInf);
}

TEST_CASE("profiles round-trip through JSON")
{
    const PhaseSpaceConfig g(1.0, 0.2, 1);
    const auto f = buildPlateauProfile({FamilyKind::PlateauInner, -2.0, 1.5, g, 1});
    const Json j = toJson(f);
    CHECK(j.contains("derivatives"));
    CHECK(j["evenSymmetric"] == true);
    const auto back = profileFromJson(j);
    for (double r = -1.0; r <= 1.0; r += 0.01) {
        CHECK(back.value(r) == doctest::Approx(f.value(r)).epsilon(1e-10));
    }
}

TEST_CASE("Hamiltonian specs load from JSON")
{
    const Json spec = Json::parse(R"({
        "form": "threeChart",
        "geometry": {"R": 1, "u": 0.3, "n": 2},
        "profileRef": {"kind": "plateauInner", "s": -2, "c": 1.5, "ell": 1}
    })");
    const auto H = hamiltonianFromJson(spec);
    CHECK(H.form() == ProductHamiltonian::Form::ThreeChart);
    CHECK(H.n() == 2);
    const auto direct = ProductHamiltonian::threeChart(
        H.geometry(), buildPlateauProfile({FamilyKind::PlateauInner, -2.0, 1.5, H.geometry(), 1}), -2.0);
    const State x{0.25, 0.1, -0.2, 0.3, 0.4, 0.5};
    CHECK(H.value(x.data()) == direct.value(x.data()));

    const Json sharp = Json::parse(R"({"form": "outerRadial", "geometry": {"R": 1, "u": 0, "n": 1},
        "profileRef": {"kind": "sharpness", "ell": 1, "a": "-inf", "delta": 0.1}})");
    CHECK(infOverMarkedSet(hamiltonianFromJson(sharp)) == doctest::Approx(0.9));

    const Json grid = Json::parse(R"({"form": "sampledGrid", "geometry": {"R": 1, "n": 1},
        "grid": {"shape": [2, 1], "values": [0, 0], "modes": [{"k": [1, 0], "amplitude": 0.1}]}})");
    CHECK(hamiltonianFromJson(grid).form() == ProductHamiltonian::Form::SampledGrid);

    CHECK_THROWS_AS(hamiltonianFromJson(Json::parse(R"({"form": "outerRadial"})")), ParseError);
    CHECK_THROWS_AS(hamiltonianFromJson(Json::parse(R"({"form": "spiral", "geometry": {"R": 1}})")), ParseError);
    CHECK_THROWS_AS(
        hamiltonianFromJson(Json::parse(R"({"form": "outerRadial", "geometry": {"R": 1}, "profileRef": {"kind": "x"}})")),
        ParseError);
}

TEST_CASE("reports carry the fixed field set and are byte-stable")
{
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    SharpnessOptions opts;
    opts.seedCount = 50;
    opts.integrator.stepCount = 16;
    const auto rep = verifySharpness(g, 1, -kInf, 0.1, opts);
    const CapacityQuery q{g, 1, -kInf};
    const auto cap = capacityFormula(g, 1, -kInf);
    const Json j = verifierReport(q, cap, rep, std::nullopt);
    for (const char *key : {"query", "capacityValue", "sharpnessWitness", "existenceWitness", "orbitTable", "pass"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["query"]["a"] == "-inf");
    CHECK(j["pass"] == true);

    const auto again = verifierReport(q, cap, verifySharpness(g, 1, -kInf, 0.1, opts), std::nullopt);
    CHECK(dumpJson(j) == dumpJson(again));
    // Keys come out sorted.
    const std::string text = dumpJson(j);
    CHECK(text.find("\"capacityValue\"") < text.find("\"existenceWitness\""));
    CHECK(text.find("\"orbitTable\"") < text.find("\"query\""));

    const auto inf = capacityFormula(g, 1, 0.5, {1, 0});
    CHECK(toJson(inf)["value"] == "inf");
    CHECK(summaryCsvRow(q, inf, true) == "1,0,1,1,-inf,inf,true,true\n");
}

TEST_CASE("CSV exports")
{
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    const auto H = ProductHamiltonian::outerRadial(g, buildPlateauProfile({FamilyKind::PlateauOuter, 4.0, 1.0, g, 2}));
    const auto csv = spectrumCsv(actionSpectrum(H, HomotopyClass(2, 1)));
    CHECK(csv.rfind("action,kind,level,dimension,morseBott\n", 0) == 0);
    CHECK(count(csv, "\n") == 3u);
    CHECK(count(csv, ",P,") == 2u);

    const auto entries = shootingSweep(H, HomotopyClass(2, 1), seedLattice(H, 9), {{}, false, 1});
    const auto sweep = sweepCsv(entries);
    CHECK(sweep.rfind("seed,converged,level,action,winding,kernelDim,residual\n", 0) == 0);
    CHECK(count(sweep, "\n") == 10u);
    CHECK(sweepCsv(entries) == sweep);
}

TEST_CASE("profile SVG draws one tangent per slope root")
{
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    const auto f = buildPlateauProfile({FamilyKind::PlateauOuter, 4.0, 1.0, g, 2});
    ProfilePlot plot;
    plot.profile = &f;
    plot.slope = 2.0;
    const auto svg = profileSvg(plot);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "class=\"tangent\"") == solveSlope(f, 2.0, -1.0, 1.0).roots.size());
    CHECK(count(svg, "class=\"tangent\"") == 2u);
    CHECK(svg == profileSvg(plot));

    plot.profile = nullptr;
    CHECK_THROWS_AS(profileSvg(plot), InvalidConfig);
}

TEST_CASE("loops serialize as sample records")
{
    const PhaseSpaceConfig g(1.0, 0.0, 1);
    const auto H = ProductHamiltonian::outerRadial(g, buildPlateauProfile({FamilyKind::PlateauOuter, 4.0, 1.0, g, 2}));
    const auto fams = enumerateFamilies(H, HomotopyClass(2, 1));
    const auto loop = sampleRepresentative(H, fams.front(), HomotopyClass(2, 1), 8);
    const auto lifted = toJson(loop, true);
    const auto wrapped = toJson(loop, false);
    CHECK(lifted.size() == 9u);
    CHECK(wrapped.size() == 8u);
    CHECK(lifted.back()["lifted"] == true);
    CHECK(lifted.back()["q0"].get<double>() == doctest::Approx(2.0));
    CHECK(wrapped[4]["q0"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(wrapped[0]["p"].size() == 1u);
}
