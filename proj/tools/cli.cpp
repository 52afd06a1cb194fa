#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hamcap/acceptance.hpp"
#include "hamcap/errors.hpp"
#include "hamcap/homology_capacity.hpp"
#include "hamcap/report_io.hpp"

namespace hamcap::cli {

namespace {

enum class Format { Text, Json, Csv, Svg };

struct RunConfig {
    double R = 1.0;
    double u = 0.0;
    int n = 1;
    int ell = 0;
    std::string a; // "-inf" allowed
    std::optional<double> c;
    std::optional<double> s;
    double delta = 0.1;
    int seedBudget = 1000;
    int steps = 512;
    std::string outputDir;
    Format format = Format::Text;
    std::string hamiltonianFile;
    std::string kind;
    std::vector<int> beta;
    std::vector<int> only;
    std::string table = "all";
};

// Output sink: stdout, plus files and a manifest when --outputDir is set.
class Artifacts {
public:
    Artifacts(const RunConfig &cfg, std::string command, std::ostream &out)
        : cfg_(cfg), command_(std::move(command)), out_(out)
    {
    }

    void emit(const std::string &name, const std::string &text)
    {
        print(text);
        save(name, text);
    }

    void print(const std::string &text) { out_ << text << std::flush; }

    void save(const std::string &name, const std::string &text)
    {
        if (cfg_.outputDir.empty()) {
            return;
        }
        const auto path = std::filesystem::path(cfg_.outputDir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            throw InvalidConfig("cannot write " + path.string());
        }
        f << text;
        files_.push_back(name);
    }

    void writeManifest(const Json &parameters)
    {
        if (cfg_.outputDir.empty()) {
            return;
        }
        Json m{{"command", command_}, {"parameters", parameters}, {"files", files_}};
        std::ofstream(std::filesystem::path(cfg_.outputDir) / "manifest.json", std::ios::binary) << dumpJson(m);
    }

private:
    const RunConfig &cfg_;
    std::string command_;
    std::ostream &out_;
    std::vector<std::string> files_;
};

// CLI11 would read "-inf" as a cluster of short flags.
std::vector<std::string> joinNegativeInfinity(int argc, const char *const *argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--", 0) == 0 && arg.find('=') == std::string::npos && i + 1 < argc &&
            std::string(argv[i + 1]) == "-inf") {
            arg += "=-inf";
            ++i;
        }
        args.push_back(std::move(arg));
    }
    return args;
}

double parseA(const RunConfig &cfg)
{
    if (cfg.a.empty()) {
        throw ParseError("--a is required");
    }
    return parseExtendedReal(cfg.a);
}

PhaseSpaceConfig geometry(const RunConfig &cfg)
{
    return PhaseSpaceConfig(cfg.R, cfg.u, cfg.n);
}

IntegratorConfig integrator(const RunConfig &cfg)
{
    IntegratorConfig ic;
    ic.stepCount = cfg.steps;
    ic.validate();
    return ic;
}

Json parameters(const RunConfig &cfg)
{
    Json p{{"R", jsonNumber(cfg.R)}, {"u", jsonNumber(cfg.u)}, {"n", cfg.n}, {"ell", cfg.ell},
           {"seedBudget", cfg.seedBudget}, {"steps", cfg.steps}};
    if (!cfg.a.empty()) {
        p["a"] = jsonNumber(parseExtendedReal(cfg.a));
    }
    if (cfg.c) {
        p["c"] = jsonNumber(*cfg.c);
    }
    if (cfg.s) {
        p["s"] = jsonNumber(*cfg.s);
    }
    p["delta"] = jsonNumber(cfg.delta);
    if (!cfg.hamiltonianFile.empty()) {
        p["hamiltonian"] = cfg.hamiltonianFile;
    }
    if (!cfg.kind.empty()) {
        p["kind"] = cfg.kind;
    }
    if (!cfg.beta.empty()) {
        p["beta"] = cfg.beta;
    }
    p["seed"] = rngSeedFromEnvironment();
    return p;
}

// Hamiltonian from --hamiltonian, or from the family flags.
//   --kind plateauOuter | plateauInner | bump | sharpness (default: by the sign of s)
ProductHamiltonian hamiltonian(const RunConfig &cfg)
{
    if (!cfg.hamiltonianFile.empty()) {
        std::ifstream f(cfg.hamiltonianFile);
        if (!f) {
            throw ParseError("cannot read " + cfg.hamiltonianFile);
        }
        Json spec;
        try {
            spec = Json::parse(f);
        } catch (const nlohmann::json::exception &e) {
            throw ParseError(e.what());
        }
        return hamiltonianFromJson(spec);
    }
    const auto g = geometry(cfg);
    const double s = cfg.s.value_or(-2.0);
    Json ref{{"s", s}, {"ell", cfg.ell}};
    std::string kind = cfg.kind;
    if (kind.empty()) {
        kind = cfg.ell == 0 ? "bump" : (s > 0 ? "plateauOuter" : "plateauInner");
    }
    ref["kind"] = kind;
    ref["c"] = cfg.c.value_or(std::max(g.u() * cfg.ell, 0.0) + 1.0);
    if (kind == "sharpness") {
        ref["a"] = jsonNumber(parseA(cfg));
        ref["delta"] = cfg.delta;
    }
    const bool threeChart = (kind == "plateauInner") || (kind == "bump" && s < 0);
    Json spec{{"geometry", toJson(g)}, {"form", threeChart ? "threeChart" : "outerRadial"}, {"profileRef", ref}};
    return hamiltonianFromJson(spec);
}

int cmdCapacity(const RunConfig &cfg, Artifacts &art)
{
    const auto g = geometry(cfg);
    const double a = parseA(cfg);
    const CapacityQuery q{g, cfg.ell, a};
    const auto cap = capacityFormula(g, cfg.ell, a, cfg.beta);
    if (cfg.format == Format::Json) {
        art.emit("capacity.json", dumpJson(verifierReport(q, cap, std::nullopt, std::nullopt)));
    } else if (cfg.format == Format::Csv) {
        art.emit("capacity.csv", summaryCsvHeader() + summaryCsvRow(q, cap, true));
    } else {
        art.emit("capacity.txt", formatNumber(cap.value) + "\n");
    }
    return 0;
}

int cmdSpectrum(const RunConfig &cfg, Artifacts &art)
{
    const auto H = hamiltonian(cfg);
    const auto spec = actionSpectrum(H, HomotopyClass(cfg.ell, H.n()));
    if (cfg.format == Format::Csv) {
        art.emit("spectrum.csv", spectrumCsv(spec));
    } else {
        art.emit("spectrum.json", dumpJson(toJson(spec)));
    }
    return 0;
}

int cmdOrbits(const RunConfig &cfg, Artifacts &art)
{
    const auto H = hamiltonian(cfg);
    const HomotopyClass cls(cfg.ell, H.n());
    SweepOptions opts;
    opts.integrator = integrator(cfg);
    const auto entries = shootingSweep(H, cls, seedLattice(H, cfg.seedBudget), opts);
    if (cfg.format == Format::Csv) {
        art.emit("sweep.csv", sweepCsv(entries));
    }
    Json report;
    bool pass = true;
    if (H.radial()) {
        const auto fams = enumerateFamilies(H, cls);
        const auto cmp = compareWithAnalytic(fams, entries, cls);
        Json jf = Json::array();
        for (const auto &f : fams) {
            jf.push_back(toJson(f));
        }
        report["families"] = jf;
        report["comparison"] = toJson(cmp);
        pass = cmp.pass();
    } else {
        OracleComparison numericOnly;
        numericOnly.clusters = clusterOrbits(entries);
        report["clusters"] = toJson(numericOnly)["clusters"];
    }
    report["pass"] = pass;
    if (cfg.format != Format::Csv) {
        art.emit("orbits.json", dumpJson(report));
    }
    return pass ? 0 : 1;
}

int cmdSharpness(const RunConfig &cfg, Artifacts &art)
{
    const auto g = geometry(cfg);
    const double a = parseA(cfg);
    SharpnessOptions opts;
    opts.seedCount = cfg.seedBudget;
    opts.integrator = integrator(cfg);
    opts.rngSeed = rngSeedFromEnvironment();
    const auto rep = verifySharpness(g, cfg.ell, a, cfg.delta, opts);
    const CapacityQuery q{g, cfg.ell, a};
    auto cap = capacityFormula(g, cfg.ell, a);
    cap.witnessSharpness = "sharpness profile at level " + formatNumber(rep.level - cfg.delta);
    if (cfg.format == Format::Csv) {
        art.emit("summary.csv", summaryCsvHeader() + summaryCsvRow(q, cap, rep.pass));
    } else {
        art.emit("sharpness.json", dumpJson(verifierReport(q, cap, rep, std::nullopt)));
    }
    return rep.pass ? 0 : 1;
}

int cmdExists(const RunConfig &cfg, Artifacts &art)
{
    RunConfig local = cfg;
    if (cfg.hamiltonianFile.empty() && !cfg.c && cfg.kind.empty()) {
        // Smallest c the hypothesis allows.
        local.c = std::max(cfg.R * std::abs(cfg.ell) + cfg.u * cfg.ell, 0.0);
        if (cfg.ell == 0) {
            local.c = 1.0;
        }
    }
    const auto H = hamiltonian(local);
    ExistenceOptions opts;
    opts.seedBudget = cfg.seedBudget;
    opts.integrator = integrator(cfg);
    opts.rngSeed = rngSeedFromEnvironment();
    const auto rep = verifyExistence(H, cfg.ell, opts);
    const CapacityQuery q{H.geometry(), cfg.ell, 0.0};
    CapacityResult cap;
    cap.value = rep.bound;
    if (rep.witness) {
        cap.witnessExistence = std::string(kindName(rep.witness->kind)) + "-family at level " +
                               formatNumber(rep.witness->level);
    }
    art.emit("exists.json", dumpJson(verifierReport(q, cap, std::nullopt, rep)));
    if (rep.status == ExistenceStatus::Inconclusive) {
        return 0;
    }
    return rep.pass ? 0 : 1;
}

std::string row(const std::string &name, const std::vector<long long> &xs)
{
    std::string s = name + ":";
    for (long long x : xs) {
        s += " " + std::to_string(x);
    }
    return s + "\n";
}

int cmdHomology(const RunConfig &cfg, Artifacts &art)
{
    const auto g = geometry(cfg);
    const int n = cfg.n;
    const int top = 2 * n + 1;
    const std::string &t = cfg.table;
    static const std::vector<std::string> known{"all", "betti", "morse", "sh", "rsh", "t-rank", "claim6"};
    if (std::find(known.begin(), known.end(), t) == known.end()) {
        throw ParseError("unknown table '" + t + "'");
    }
    auto want = [&](const char *name) { return t == "all" || t == name; };
    Json j;
    std::string out;
    auto add = [&](const std::string &name, const std::vector<long long> &xs) {
        j[name] = xs;
        out += row(name, xs);
    };
    auto degrees = [&](auto f) {
        std::vector<long long> xs;
        for (int k = 0; k <= top; ++k) {
            xs.push_back(f(k));
        }
        return xs;
    };
    if (want("betti")) {
        add("betti_T" + std::to_string(top), betti(top).dims);
        add("betti_T" + std::to_string(n + 1), betti(n + 1).dims);
    }
    if (want("morse")) {
        const auto ft = morseCritTable(MorseFunction::FT, n);
        const auto fm = morseCritTable(MorseFunction::FminusT, n);
        j["morse_F_T"] = toJson(ft);
        j["morse_F_-T"] = toJson(fm);
        out += row("morse_F_T_index_counts", ft.indexCounts());
        out += row("morse_F_-T_index_counts", fm.indexCounts());
        out += "morse_F_T_min: " + formatNumber(ft.minValue) + "\nmorse_F_T_gamma: " + formatNumber(ft.gammaValue) + "\n";
    }
    // "all" includes the action-window tables only when --a (and --c) are given.
    const bool needA = t == "sh" || t == "rsh" || t == "t-rank" || (t == "all" && !cfg.a.empty());
    if (needA) {
        const double a = parseA(cfg);
        if (want("sh")) {
            add("sh", degrees([&](int k) { return shDims(g, cfg.ell, a, k); }));
        }
        if (t == "rsh" || t == "t-rank" || (t == "all" && cfg.c)) {
            if (!cfg.c) {
                throw ParseError("--c is required for rsh and t-rank");
            }
            if (want("rsh")) {
                add("rsh", degrees([&](int k) { return rshDims(g, cfg.ell, a, *cfg.c, k); }));
            }
            if (want("t-rank")) {
                add("t-rank", degrees([&](int k) { return tMapRank(g, cfg.ell, a, *cfg.c, k); }));
            }
        }
    }
    if (want("claim6")) {
        add("claim6", degrees([&](int k) { return claim6Dims(n, k); }));
    }
    if (cfg.format == Format::Json) {
        art.emit("homology.json", dumpJson(j));
    } else {
        art.emit("homology.txt", out);
    }
    return 0;
}

int cmdPlotProfile(const RunConfig &cfg, Artifacts &art)
{
    const auto H = hamiltonian(cfg);
    if (!H.radial()) {
        throw NotRadial("plot-profile needs a radial Hamiltonian");
    }
    const auto &f = *H.profile();
    const auto &g = H.geometry();
    ProfilePlot plot;
    plot.profile = &f;
    if (H.form() == ProductHamiltonian::Form::OuterRadial) {
        plot.slope = H.radialScale() * cfg.ell;
        plot.lo = std::max(f.domainLo(), -g.R() / H.radialScale());
        plot.hi = std::min(f.domainHi(), g.R() / H.radialScale());
    } else {
        // Bump chart: tangents of slope m_u ell.
        plot.slope = g.mu() * cfg.ell;
        plot.lo = -1.0;
        plot.hi = 1.0;
    }
    plot.title = "f and f' (R=" + formatNumber(g.R()) + ", u=" + formatNumber(g.u()) + ", ell=" + std::to_string(cfg.ell) + ")";
    art.emit("profile.svg", profileSvg(plot));
    return 0;
}

int cmdAccept(const RunConfig &cfg, Artifacts &art)
{
    AcceptanceOptions opts;
    opts.seedCount = cfg.seedBudget;
    opts.only = cfg.only;
    opts.rngSeed = rngSeedFromEnvironment();
    std::string lines;
    opts.onResult = [&](const CriterionResult &r) {
        lines += formatCriterion(r) + "\n";
        art.print(formatCriterion(r) + "\n");
    };
    bool pass = true;
    for (const auto &r : runAcceptance(opts)) {
        pass = pass && r.pass;
    }
    art.print(std::string(pass ? "acceptance: PASS" : "acceptance: FAIL") + "\n");
    art.save("acceptance.txt", lines);
    return pass ? 0 : 1;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Relative capacity and periodic-orbit verifier for the annulus times a torus", "hamcap"};
    app.require_subcommand(1);
    RunConfig cfg;

    std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}, {"svg", Format::Svg}};
    auto common = [&](CLI::App *sub) {
        sub->add_option("--R", cfg.R, "annulus radius")->check(CLI::PositiveNumber);
        sub->add_option("--u", cfg.u, "marked level, |u| < R");
        sub->add_option("--n", cfg.n, "torus dimension n")->check(CLI::Range(1, 8));
        sub->add_option("--ell", cfg.ell, "winding class ell");
        sub->add_option("--outputDir", cfg.outputDir, "write artifacts and manifest.json here");
        sub->add_option("--format", cfg.format, "text | json | csv | svg")->transform(CLI::CheckedTransformer(formats));
        sub->add_option("--seedBudget", cfg.seedBudget, "seeds per numeric sweep")->check(CLI::PositiveNumber);
        sub->add_option("--steps", cfg.steps, "integrator steps per unit time")->check(CLI::Range(16, 1 << 20));
    };
    auto family = [&](CLI::App *sub) {
        sub->add_option("--s", cfg.s, "family parameter s, |s| >= 1");
        sub->add_option("--c", cfg.c, "profile offset c");
        sub->add_option("--kind", cfg.kind, "plateauOuter | plateauInner | bump | sharpness");
        sub->add_option("--hamiltonian", cfg.hamiltonianFile, "Hamiltonian spec JSON")->check(CLI::ExistingFile);
        sub->add_option("--a", cfg.a, "action window start (for --kind sharpness)");
        sub->add_option("--delta", cfg.delta, "sharpness margin");
    };

    auto *capacity = app.add_subcommand("capacity", "relative capacity max{R|ell| + u ell, a + u ell}");
    common(capacity);
    capacity->add_option("--a", cfg.a, "action window start, -inf allowed")->required();
    capacity->add_option("--beta", cfg.beta, "torus winding (nonzero gives +inf)");

    auto *orbits = app.add_subcommand("orbits", "analytic families and a numeric shooting sweep");
    common(orbits);
    family(orbits);

    auto *spectrum = app.add_subcommand("spectrum", "action spectrum of a radial Hamiltonian");
    common(spectrum);
    family(spectrum);

    auto *sharpness = app.add_subcommand("sharpness", "verify the sharpness Hamiltonian has no orbit of action >= a");
    common(sharpness);
    sharpness->add_option("--a", cfg.a, "action window start, -inf allowed")->required();
    sharpness->add_option("--delta", cfg.delta, "margin below the capacity level");

    auto *exists = app.add_subcommand("exists", "find an orbit with action >= c - u ell");
    common(exists);
    family(exists);

    auto *homology = app.add_subcommand("homology", "Betti, Morse and homology dimension tables");
    common(homology);
    homology->add_option("--table", cfg.table, "all | betti | morse | sh | rsh | t-rank | claim6");
    homology->add_option("--a", cfg.a, "action window start");
    homology->add_option("--c", cfg.c, "marked-set infimum c");

    auto *plot = app.add_subcommand("plot-profile", "SVG of f and f' with tangent lines of slope ell");
    common(plot);
    family(plot);

    auto *accept = app.add_subcommand("accept", "run the acceptance suite");
    common(accept);
    accept->add_option("--only", cfg.only, "criterion ids to run");

    const auto args = joinNegativeInfinity(argc, argv);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "hamcap: " << e.what() << "\n";
        return 2;
    }

    CLI::App *sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        if (!cfg.outputDir.empty()) {
            std::filesystem::create_directories(cfg.outputDir);
        }
        Artifacts art(cfg, name, out);
        int code = 0;
        if (name == "capacity") {
            code = cmdCapacity(cfg, art);
        } else if (name == "orbits") {
            code = cmdOrbits(cfg, art);
        } else if (name == "spectrum") {
            code = cmdSpectrum(cfg, art);
        } else if (name == "sharpness") {
            code = cmdSharpness(cfg, art);
        } else if (name == "exists") {
            code = cmdExists(cfg, art);
        } else if (name == "homology") {
            code = cmdHomology(cfg, art);
        } else if (name == "plot-profile") {
            code = cmdPlotProfile(cfg, art);
        } else {
            code = cmdAccept(cfg, art);
        }
        art.writeManifest(parameters(cfg));
        return code;
    } catch (const VerificationFailure &e) {
        err << "hamcap: " << e.what() << "\n";
        return 1;
    } catch (const Error &e) {
        err << "hamcap: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "hamcap: " << e.what() << "\n";
        return 2;
    }
}

} // namespace hamcap::cli
