#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "hamcap");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = hamcap::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("capacity command")
{
    auto r = run({"capacity", "--R", "1", "--u", "0", "--ell", "2", "--a", "-inf"});
    CHECK(r.code == 0);
    CHECK(r.out == "2\n");
    CHECK(run({"capacity", "--R", "2", "--u", "1", "--ell", "-1", "--a", "5"}).out == "4\n");
    CHECK(run({"capacity", "--ell", "0", "--a", "-1"}).out == "0\n");
    CHECK(run({"capacity", "--ell", "1", "--a", "0.5", "--n", "2", "--beta", "0", "1"}).out == "inf\n");

    const auto j = nlohmann::json::parse(run({"capacity", "--ell", "1", "--a=-inf", "--format", "json"}).out);
    CHECK(j["capacityValue"] == 1.0);
    CHECK(j["query"]["a"] == "-inf");
}

TEST_CASE("homology command")
{
    auto r = run({"homology", "--n", "1", "--table", "t-rank", "--a", "1.5", "--c", "2", "--ell", "1", "--u", "0", "--R", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "t-rank: 1 2 1 0\n");
    CHECK(run({"homology", "--n", "2", "--table", "claim6"}).out == "claim6: 0 2 7 9 5 1\n");
    CHECK(run({"homology", "--n", "1", "--table", "rsh", "--a", "1", "--c", "0", "--ell", "1"}).code == 2);
    CHECK(run({"homology", "--n", "1", "--table", "nope"}).code == 2);
}

TEST_CASE("bad flags exit with 2")
{
    CHECK(run({}).code == 2);
    CHECK(run({"capacity", "--ell", "1"}).code == 2);
    CHECK(run({"capacity", "--ell", "1", "--a", "x"}).code == 2);
    CHECK(run({"capacity", "--ell", "1", "--a", "1", "--R", "-1"}).code == 2);
    CHECK(run({"capacity", "--ell", "1", "--a", "1", "--u", "3"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"sharpness", "--ell", "0", "--a", "-1"}).code == 2);
    CHECK(run({"exists", "--hamiltonian", "/nonexistent.json", "--ell", "1"}).code == 2);
    CHECK(run({"capacity", "--help"}).code == 0);
}

TEST_CASE("verifier commands")
{
    auto sharp = run({"sharpness", "--ell", "1", "--a", "-inf", "--steps", "16", "--seedBudget", "200"});
    CHECK(sharp.code == 0);
    CHECK(nlohmann::json::parse(sharp.out)["pass"] == true);

    auto exists = run({"exists", "--ell", "1", "--u", "0.3", "--s", "-2"});
    CHECK(exists.code == 0);
    const auto j = nlohmann::json::parse(exists.out);
    CHECK(j["existenceWitness"]["status"] == "verified");
    CHECK(j["existenceWitness"]["perturbationCount"] == 4);

    // c below R|ell| + u ell violates the hypothesis.
    CHECK(run({"exists", "--ell", "1", "--s", "-2", "--c", "0.5"}).code == 2);

    auto orbits = run({"orbits", "--ell", "1", "--u", "0.3", "--s", "-2", "--seedBudget", "300"});
    CHECK(orbits.code == 0);
    CHECK(nlohmann::json::parse(orbits.out)["comparison"]["missing"].empty());

    auto spectrum = run({"spectrum", "--ell", "2", "--s", "4", "--format", "csv"});
    CHECK(spectrum.out.rfind("action,kind,level,dimension,morseBott\n", 0) == 0);
}

TEST_CASE("artifacts and manifest under --outputDir are byte-stable")
{
    const auto dir = std::filesystem::temp_directory_path() / "hamcap_cli_test";
    std::filesystem::remove_all(dir);
    const std::vector<std::string> args{"sharpness", "--ell", "2", "--a", "0.5", "--R", "2", "--u", "0.5",
                                        "--steps", "16", "--seedBudget", "100", "--outputDir", dir.string()};
    REQUIRE(run(args).code == 0);
    const auto first = slurp(dir / "sharpness.json");
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["command"] == "sharpness");
    CHECK(manifest["files"] == nlohmann::json::array({"sharpness.json"}));
    CHECK(manifest["parameters"]["a"] == 0.5);
    REQUIRE(run(args).code == 0);
    CHECK(slurp(dir / "sharpness.json") == first);

    REQUIRE(run({"plot-profile", "--ell", "2", "--s", "4", "--outputDir", dir.string()}).code == 0);
    CHECK(slurp(dir / "profile.svg").find("class=\"tangent\"") != std::string::npos);
    std::filesystem::remove_all(dir);
}
