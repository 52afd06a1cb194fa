#include "hamcap/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hamcap/errors.hpp"

namespace hamcap {

Json jsonNumber(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    const double rounded = std::strtod(buf, nullptr);
    return rounded == 0.0 ? 0.0 : rounded; // no "-0.0"
}

double parseExtendedReal(const std::string &text)
{
    if (text == "inf" || text == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (text == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw ParseError("not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) {
        throw ParseError("not a number: '" + text + "'");
    }
    return v;
}

double numberFromJson(const Json &j)
{
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        return parseExtendedReal(j.get<std::string>());
    }
    throw ParseError("expected a number, got " + j.dump());
}

std::string dumpJson(const Json &j)
{
    return j.dump(2) + "\n";
}

std::string formatNumber(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

namespace {

Json numbers(const std::vector<double> &xs)
{
    Json out = Json::array();
    for (double x : xs) {
        out.push_back(jsonNumber(x));
    }
    return out;
}

Json pointJson(double t, const PhasePoint &x)
{
    return Json{{"t", jsonNumber(t)}, {"p0", jsonNumber(x.p0)}, {"q0", jsonNumber(x.q0)}, {"p", numbers(x.p)},
                {"q", numbers(x.q)}};
}

std::string windingText(const std::vector<int> &w)
{
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        s += (i ? ";" : "") + std::to_string(w[i]);
    }
    return s;
}

} // namespace

Json toJson(const PhaseSpaceConfig &g)
{
    return Json{{"R", jsonNumber(g.R())}, {"u", jsonNumber(g.u())}, {"n", g.n()}};
}

Json toJson(const RadialProfile &f)
{
    return Json{{"domain", f.domain() == ProfileDomain::Raw ? "raw" : "normalized"},
                {"domainLo", jsonNumber(f.domainLo())},
                {"domainHi", jsonNumber(f.domainHi())},
                {"breakpoints", numbers(f.breakpoints())},
                {"values", numbers(f.values())},
                {"derivatives", numbers(f.slopes())},
                {"evenSymmetric", f.evenSymmetric()}};
}

Json toJson(const PeriodicOrbitFamily &fam)
{
    return Json{{"kind", kindName(fam.kind)},
                {"radialRoot", jsonNumber(fam.radialRoot)},
                {"level", jsonNumber(fam.level)},
                {"dimension", fam.dimension},
                {"action", jsonNumber(fam.action)},
                {"morseBott", fam.morseBott},
                {"secondDerivativeSign", fam.secondDerivativeSign},
                {"profileValue", jsonNumber(fam.profileValue)},
                {"continuum", fam.continuum}};
}

Json toJson(const ActionSpectrum &spec)
{
    Json out = Json::array();
    for (const auto &e : spec.entries) {
        const auto &f = spec.families[e.familyIndex];
        out.push_back(Json{{"action", jsonNumber(e.action)},
                           {"kind", kindName(f.kind)},
                           {"level", jsonNumber(f.level)},
                           {"dimension", f.dimension},
                           {"morseBott", f.morseBott}});
    }
    return out;
}

Json toJson(const SweepEntry &e)
{
    return Json{{"seed", e.seed},
                {"converged", e.converged},
                {"status", statusName(e.status)},
                {"level", jsonNumber(e.level)},
                {"action", jsonNumber(e.action)},
                {"winding", e.winding},
                {"kernelDim", e.kernelDim},
                {"residual", jsonNumber(e.residual)}};
}

Json toJson(const OracleComparison &cmp)
{
    Json clusters = Json::array();
    for (const auto &c : cmp.clusters) {
        clusters.push_back(Json{{"level", jsonNumber(c.level)},
                                {"action", jsonNumber(c.action)},
                                {"kernelDim", c.kernelDim},
                                {"count", c.count},
                                {"seed", c.seed}});
    }
    Json extra = Json::array();
    for (const auto &c : cmp.extra) {
        extra.push_back(Json{{"level", jsonNumber(c.level)}, {"action", jsonNumber(c.action)}, {"count", c.count}});
    }
    return Json{{"clusters", clusters},
                {"matched", cmp.matched},
                {"missing", cmp.missing},
                {"extra", extra},
                {"worstLevelError", jsonNumber(cmp.worstLevelError)},
                {"worstActionError", jsonNumber(cmp.worstActionError)},
                {"kernelMismatches", cmp.kernelMismatches},
                {"tolerance", jsonNumber(cmp.tolerance)},
                {"pass", cmp.pass()}};
}

Json toJson(const LoopSample &loop, bool lifted)
{
    Json out = Json::array();
    if (lifted) {
        for (std::size_t k = 0; k < loop.size(); ++k) {
            auto rec = pointJson(loop.times[k], PhasePoint::fromState(loop.lifted[k]));
            rec["lifted"] = true;
            out.push_back(std::move(rec));
        }
        return out;
    }
    const auto points = loop.wrapped();
    for (std::size_t k = 0; k < points.size(); ++k) {
        out.push_back(pointJson(loop.times[k], points[k]));
    }
    return out;
}

Json toJson(const CapacityResult &cap)
{
    Json out{{"value", jsonNumber(cap.value)}, {"infinite", cap.infinite}};
    if (cap.witnessSharpness) {
        out["witnessSharpness"] = *cap.witnessSharpness;
    }
    if (cap.witnessExistence) {
        out["witnessExistence"] = *cap.witnessExistence;
    }
    return out;
}

Json toJson(const SharpnessReport &rep)
{
    Json fams = Json::array();
    for (const auto &f : rep.families) {
        fams.push_back(toJson(f));
    }
    return Json{{"ell", rep.ell},
                {"a", jsonNumber(rep.a)},
                {"delta", jsonNumber(rep.delta)},
                {"level", jsonNumber(rep.level)},
                {"markedInfimum", jsonNumber(rep.markedInfimum)},
                {"supportRadius", jsonNumber(rep.supportRadius)},
                {"compactSupport", rep.compactSupport},
                {"families", fams},
                {"analyticViolations", rep.analyticViolations},
                {"numericConverged", rep.numericConverged},
                {"numericViolations", rep.numericViolations},
                {"worstNumericAction", jsonNumber(rep.worstNumericAction)},
                {"pass", rep.pass}};
}

Json toJson(const ExistenceReport &rep)
{
    Json fams = Json::array();
    for (const auto &f : rep.families) {
        fams.push_back(toJson(f));
    }
    Json out{{"ell", rep.ell},
             {"c", jsonNumber(rep.c)},
             {"bound", jsonNumber(rep.bound)},
             {"status", statusName(rep.status)},
             {"witnessAction", jsonNumber(rep.witnessAction)},
             {"numericConverged", rep.numericConverged},
             {"numericLevel", jsonNumber(rep.numericLevel)},
             {"numericAction", jsonNumber(rep.numericAction)},
             {"levelAgreement", jsonNumber(rep.levelAgreement)},
             {"actionAgreement", jsonNumber(rep.actionAgreement)},
             {"bettiBound", rep.bettiBound},
             {"seedsUsed", rep.seedsUsed},
             {"signReview", rep.signReview},
             {"families", fams},
             {"pass", rep.pass}};
    out["witness"] = rep.witness ? toJson(*rep.witness) : Json(nullptr);
    out["perturbationCount"] = rep.perturbationCount ? Json(*rep.perturbationCount) : Json(nullptr);
    return out;
}

Json toJson(const MorseCritTable &table)
{
    Json points = Json::array();
    for (const auto &p : table.points) {
        points.push_back(Json{{"coordinates", numbers(p.coordinates)}, {"index", p.index}, {"value", jsonNumber(p.value)}});
    }
    return Json{{"function", table.function == MorseFunction::FT ? "F_T" : "F_-T"},
                {"n", table.n},
                {"points", points},
                {"indexCounts", table.indexCounts()},
                {"minValue", jsonNumber(table.minValue)},
                {"gammaValue", std::isnan(table.gammaValue) ? Json(nullptr) : jsonNumber(table.gammaValue)}};
}

Json verifierReport(const CapacityQuery &query, const CapacityResult &cap, const std::optional<SharpnessReport> &sharp,
                    const std::optional<ExistenceReport> &exists)
{
    Json out;
    out["query"] = Json{{"geometry", toJson(query.geometry)}, {"ell", query.ell}, {"a", jsonNumber(query.a)}};
    out["capacityValue"] = jsonNumber(cap.value);
    out["sharpnessWitness"] = sharp ? toJson(*sharp) : Json(nullptr);
    out["existenceWitness"] = exists ? toJson(*exists) : Json(nullptr);
    Json table = Json::array();
    if (sharp) {
        for (const auto &f : sharp->families) {
            table.push_back(toJson(f));
        }
    }
    out["orbitTable"] = table;
    out["pass"] = (!sharp || sharp->pass) && (!exists || exists->pass);
    return out;
}

std::string spectrumCsv(const ActionSpectrum &spec)
{
    std::ostringstream os;
    os << "action,kind,level,dimension,morseBott\n";
    for (const auto &e : spec.entries) {
        const auto &f = spec.families[e.familyIndex];
        os << formatNumber(e.action) << ',' << kindName(f.kind) << ',' << formatNumber(f.level) << ',' << f.dimension
           << ',' << (f.morseBott ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string sweepCsv(const std::vector<SweepEntry> &entries)
{
    std::ostringstream os;
    os << "seed,converged,level,action,winding,kernelDim,residual\n";
    for (const auto &e : entries) {
        os << e.seed << ',' << (e.converged ? "true" : "false") << ',' << formatNumber(e.level) << ','
           << formatNumber(e.action) << ',' << windingText(e.winding) << ',' << e.kernelDim << ','
           << formatNumber(e.residual) << '\n';
    }
    return os.str();
}

std::string summaryCsvHeader()
{
    return "R,u,n,ell,a,capacity,infinite,pass\n";
}

std::string summaryCsvRow(const CapacityQuery &q, const CapacityResult &cap, bool pass)
{
    std::ostringstream os;
    os << formatNumber(q.geometry.R()) << ',' << formatNumber(q.geometry.u()) << ',' << q.geometry.n() << ',' << q.ell
       << ',' << formatNumber(q.a) << ',' << formatNumber(cap.value) << ',' << (cap.infinite ? "true" : "false") << ','
       << (pass ? "true" : "false") << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Loading

namespace {

const Json &field(const Json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

double numberOr(const Json &j, const char *key, double fallback)
{
    return j.contains(key) ? numberFromJson(j.at(key)) : fallback;
}

std::vector<double> numberList(const Json &j)
{
    if (!j.is_array()) {
        throw ParseError("expected an array, got " + j.dump());
    }
    std::vector<double> out;
    for (const auto &x : j) {
        out.push_back(numberFromJson(x));
    }
    return out;
}

RadialProfile profileFromRef(const Json &ref, const PhaseSpaceConfig &g)
{
    const std::string kind = field(ref, "kind").get<std::string>();
    const int ell = ref.value("ell", 0);
    const double s = numberOr(ref, "s", 1.0);
    const double c = numberOr(ref, "c", 1.0);
    if (kind == "bump") {
        return buildBumpProfile({FamilyKind::BumpContractible, s, c, g, 0});
    }
    if (kind == "plateauOuter") {
        return buildPlateauProfile({FamilyKind::PlateauOuter, s, c, g, ell});
    }
    if (kind == "plateauInner") {
        return buildPlateauProfile({FamilyKind::PlateauInner, s, c, g, ell});
    }
    if (kind == "sharpness") {
        return buildSharpnessProfile(g, ell, numberFromJson(field(ref, "a")), numberFromJson(field(ref, "delta")));
    }
    throw ParseError("unknown profile kind '" + kind + "'");
}

} // namespace

RadialProfile profileFromJson(const Json &j)
{
    const std::string domain = j.value("domain", std::string("normalized"));
    if (domain != "normalized" && domain != "raw") {
        throw ParseError("unknown profile domain '" + domain + "'");
    }
    const bool raw = domain == "raw";
    return RadialProfile(numberList(field(j, "breakpoints")), numberList(field(j, "values")),
                         numberList(field(j, "derivatives")), j.value("evenSymmetric", false),
                         raw ? ProfileDomain::Raw : ProfileDomain::Normalized, numberOr(j, "domainLo", -1.0),
                         numberOr(j, "domainHi", 1.0));
}

ProductHamiltonian hamiltonianFromJson(const Json &spec)
{
    try {
        const auto &geo = field(spec, "geometry");
        const PhaseSpaceConfig g(numberFromJson(field(geo, "R")), numberOr(geo, "u", 0.0), geo.value("n", 1));
        const std::string form = field(spec, "form").get<std::string>();
        if (form == "zero") {
            return ProductHamiltonian::zero(g);
        }
        if (form == "sampledGrid") {
            const auto &grid = field(spec, "grid");
            SampledGrid sg;
            sg.shape = field(grid, "shape").get<std::vector<int>>();
            sg.values = numberList(field(grid, "values"));
            if (grid.contains("modes")) {
                for (const auto &m : grid.at("modes")) {
                    sg.modes.push_back({field(m, "k").get<std::vector<int>>(), numberOr(m, "amplitude", 0.0),
                                        numberOr(m, "phase", 0.0)});
                }
            }
            return ProductHamiltonian::sampledGrid(g, std::move(sg));
        }
        auto profile = spec.contains("profileRef") ? profileFromRef(spec.at("profileRef"), g)
                                                   : profileFromJson(field(spec, "profile"));
        if (form == "outerRadial") {
            return ProductHamiltonian::outerRadial(g, std::move(profile));
        }
        if (form == "threeChart") {
            const double s = spec.contains("s") ? numberFromJson(spec.at("s")) : numberFromJson(field(field(spec, "profileRef"), "s"));
            return ProductHamiltonian::threeChart(g, std::move(profile), s);
        }
        throw ParseError("unknown form '" + form + "'");
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(e.what());
    }
}

// ---------------------------------------------------------------------------
// SVG

namespace {

struct Panel {
    double top, height, lo, hi, ymin, ymax;
    double left = 60.0, width = 560.0;

    double x(double r) const { return left + (r - lo) / (hi - lo) * width; }
    double y(double v) const { return top + (ymax - v) / (ymax - ymin) * height; }
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void axes(std::ostringstream &os, const Panel &p, const std::string &label, const std::string &clipId)
{
    os << "<defs><clipPath id=\"" << clipId << "\"><rect x=\"" << num(p.left) << "\" y=\"" << num(p.top)
       << "\" width=\"" << num(p.width) << "\" height=\"" << num(p.height) << "\"/></clipPath></defs>\n";
    os << "<rect x=\"" << num(p.left) << "\" y=\"" << num(p.top) << "\" width=\"" << num(p.width) << "\" height=\""
       << num(p.height) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (p.ymin < 0 && p.ymax > 0) {
        os << "<line x1=\"" << num(p.left) << "\" y1=\"" << num(p.y(0)) << "\" x2=\"" << num(p.left + p.width)
           << "\" y2=\"" << num(p.y(0)) << "\" stroke=\"#bbb\"/>\n";
    }
    os << "<text x=\"8\" y=\"" << num(p.top + 14) << "\" font-size=\"12\">" << label << "</text>\n";
    os << "<text x=\"8\" y=\"" << num(p.top + p.height) << "\" font-size=\"10\">" << formatNumber(p.ymin) << "</text>\n";
    os << "<text x=\"8\" y=\"" << num(p.top + 26) << "\" font-size=\"10\">" << formatNumber(p.ymax) << "</text>\n";
}

void polyline(std::ostringstream &os, const Panel &p, const std::vector<double> &rs, const std::vector<double> &vs,
              const char *colour, const std::string &clipId)
{
    os << "<polyline clip-path=\"url(#" << clipId << ")\" fill=\"none\" stroke=\"" << colour << "\" points=\"";
    for (std::size_t i = 0; i < rs.size(); ++i) {
        os << (i ? " " : "") << num(p.x(rs[i])) << ',' << num(p.y(vs[i]));
    }
    os << "\"/>\n";
}

void padRange(double &lo, double &hi)
{
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

} // namespace

std::string profileSvg(const ProfilePlot &plot)
{
    if (!plot.profile || !(plot.lo < plot.hi) || plot.samples < 2) {
        throw InvalidConfig("profile plot needs a profile, lo < hi and at least two samples");
    }
    const auto &f = *plot.profile;
    std::vector<double> rs, fs, ds;
    for (int k = 0; k <= plot.samples; ++k) {
        const double r = plot.lo + (plot.hi - plot.lo) * k / plot.samples;
        const auto v = f.eval(r);
        rs.push_back(r);
        fs.push_back(v.f);
        ds.push_back(v.df);
    }
    double fmin = *std::min_element(fs.begin(), fs.end());
    double fmax = *std::max_element(fs.begin(), fs.end());
    double dmin = std::min(*std::min_element(ds.begin(), ds.end()), plot.slope);
    double dmax = std::max(*std::max_element(ds.begin(), ds.end()), plot.slope);
    padRange(fmin, fmax);
    padRange(dmin, dmax);
    const Panel top{30.0, 250.0, plot.lo, plot.hi, fmin, fmax};
    const Panel bottom{310.0, 250.0, plot.lo, plot.hi, dmin, dmax};
    const auto roots = solveSlope(f, plot.slope, plot.lo, plot.hi);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"600\" viewBox=\"0 0 640 600\">\n";
    os << "<rect width=\"640\" height=\"600\" fill=\"white\"/>\n";
    os << "<text x=\"60\" y=\"18\" font-size=\"14\">" << plot.title << "</text>\n";
    axes(os, top, "f", "clipF");
    axes(os, bottom, "f'", "clipD");
    polyline(os, top, rs, fs, "#1f4e9c", "clipF");
    polyline(os, bottom, rs, ds, "#9c1f1f", "clipD");
    os << "<line x1=\"" << num(bottom.left) << "\" y1=\"" << num(bottom.y(plot.slope)) << "\" x2=\""
       << num(bottom.left + bottom.width) << "\" y2=\"" << num(bottom.y(plot.slope))
       << "\" stroke=\"#2a8c2a\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto &root : roots.roots) {
        const double fr = f.value(root.r);
        const double y0 = fr + plot.slope * (plot.lo - root.r);
        const double y1 = fr + plot.slope * (plot.hi - root.r);
        os << "<line class=\"tangent\" clip-path=\"url(#clipF)\" x1=\"" << num(top.x(plot.lo)) << "\" y1=\""
           << num(top.y(y0)) << "\" x2=\"" << num(top.x(plot.hi)) << "\" y2=\"" << num(top.y(y1))
           << "\" stroke=\"#2a8c2a\" stroke-dasharray=\"4 3\"/>\n";
        os << "<circle cx=\"" << num(top.x(root.r)) << "\" cy=\"" << num(top.y(fr)) << "\" r=\"3\" fill=\"#2a8c2a\"/>\n";
        os << "<circle cx=\"" << num(bottom.x(root.r)) << "\" cy=\"" << num(bottom.y(plot.slope))
           << "\" r=\"3\" fill=\"#2a8c2a\"/>\n";
        os << "<text x=\"" << num(top.x(root.r) + 4) << "\" y=\"" << num(top.y(fr) - 6) << "\" font-size=\"10\">r="
           << formatNumber(root.r) << "</text>\n";
    }
    os << "<text x=\"60\" y=\"590\" font-size=\"10\">r in [" << formatNumber(plot.lo) << ", " << formatNumber(plot.hi)
       << "], tangent slope " << formatNumber(plot.slope) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace hamcap
