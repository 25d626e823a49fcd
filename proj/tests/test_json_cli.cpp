#include <doctest.h>

#include "toric/cli.hpp"
#include "toric/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace toric;

namespace {

std::string corpus(const char* name)
{
    return std::string(TORIC_CORPUS_DIR) + "/" + name;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli_dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const char* name)
{
    auto p = std::filesystem::temp_directory_path() / ("toric_cli_test_" + std::string(name));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("curve json round trip is exact")
{
    auto net = load_network(corpus("two_class_planar.crn"));
    auto cert = build_embedding(net, RateBand(0.5));
    auto curve = build_zero_separating_curve_2d(cert.arrangement, cert.delta0, 1.0);
    auto back = curve_from_json(Json::parse(curve_json(curve).dump()));
    CHECK(back.vertices == curve.vertices);
    CHECK(back.directions == curve.directions);
    CHECK(back.lengths == curve.lengths);
    CHECK(back.band_of_segment == curve.band_of_segment);
    CHECK(back.scale == curve.scale);

    Json broken = curve_json(curve);
    broken["lengths"].erase(0);
    CHECK_THROWS_AS(curve_from_json(broken), Error);
}

TEST_CASE("surface certificate json validation")
{
    SurfaceCertificate c;
    Vector x(2), n(2);
    x << 1, 2;
    n << 0.6, 0.8;
    c.samples.push_back({x, n});
    auto back = surface_certificate_from_json(surface_certificate_json(c));
    REQUIRE(back.samples.size() == 1);
    CHECK(back.samples[0].x == x);
    CHECK(back.samples[0].normal == n);

    Json bad = surface_certificate_json(c);
    bad["samples"][0]["normal"] = {1.0, 1.0};
    CHECK_THROWS_AS(surface_certificate_from_json(bad), Error);
    bad = surface_certificate_json(c);
    bad["samples"][0]["x"] = {-1.0, 1.0};
    CHECK_THROWS_AS(surface_certificate_from_json(bad), Error);
}

TEST_CASE("reports carry the schema version")
{
    auto j = Json::parse(dump_report("thing", Json{{"a", 1}}));
    CHECK(j["schema"] == 1);
    CHECK(j["kind"] == "thing");
    CHECK(j["a"] == 1);
    CHECK(vector_from_json(vector_json(Vector::Ones(3))) == Vector::Ones(3));
}

TEST_CASE("cli analyze")
{
    auto r = run({"analyze", corpus("triangle.crn")});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["weakly_reversible"] == true);
    CHECK(j["reversible"] == false);
    CHECK(j["linkage_classes"].size() == 1);
    CHECK(j["deficiency"] == 0);
    CHECK(j["s"] == 2);
}

TEST_CASE("cli embed-verify")
{
    auto r = run({"embed-verify", corpus("triangle.crn"), "--epsilon", "0.5", "--trials", "1000", "--seed", "7"});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["report"]["pass"] == 1000);
    CHECK(j["report"]["trials"] == 1000);
    CHECK(r.out == run({"embed-verify", corpus("triangle.crn"), "--epsilon", "0.5", "--trials", "1000", "--seed", "7"}).out);
}

TEST_CASE("cli exit codes")
{
    auto unknown = run({"analyze", corpus("triangle.crn"), "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"analyze", "/nonexistent/net.crn"}).code == 2);
    CHECK(run({"analyze", corpus("triangle.crn"), "--format", "csv"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    auto dir = scratch("bad");
    std::ofstream(dir / "bad.crn") << "species A B\nA -> ; k=1\n";
    CHECK(run({"analyze", (dir / "bad.crn").string()}).code == 2);

    // failed precondition
    std::ofstream(dir / "oneway.crn") << "species A B\nA -> B ; k=1\n";
    CHECK(run({"gac", (dir / "oneway.crn").string()}).code == 1);
    CHECK(run({"equilibrium", corpus("planar_cycle.crn")}).code == 1);
}

TEST_CASE("cli equilibrium agrees with the gac report")
{
    auto eq = Json::parse(run({"equilibrium", corpus("reversible_cycle.crn")}).out);
    auto g = run({"gac", corpus("reversible_cycle.crn"), "--trials", "3"});
    REQUIRE(g.code == 0);
    auto gj = Json::parse(g.out);
    Vector a = vector_from_json(eq["x0"]);
    Vector b = vector_from_json(gj["equilibrium"]);
    CHECK((a - b).norm() <= 1e-10);
    CHECK(gj["outcomes"].size() == 3);
}

TEST_CASE("cli curve2d then certify-surface")
{
    auto dir = scratch("curve");
    auto r = run({"curve2d", corpus("triangle.crn"), "--epsilon", "0.5", "--trials", "10", "--horizon", "10",
                  "--faithful", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(dir / "curve2d.json"));
    CHECK(std::filesystem::exists(dir / "curve2d.svg"));
    auto c = run({"certify-surface", corpus("triangle.crn"), (dir / "curve2d.json").string(), "--epsilon", "0.5"});
    CHECK(c.code == 0);
    CHECK(Json::parse(c.out)["separation"]["passed"] == true);

    // flipping every normal makes the certificate fail
    std::ifstream in(dir / "curve2d.json");
    Json j = Json::parse(in);
    for (auto& s : j["surface"]["samples"]) {
        s["normal"][0] = -s["normal"][0].get<double>();
        s["normal"][1] = -s["normal"][1].get<double>();
    }
    std::ofstream(dir / "flipped.json") << j.dump();
    CHECK(run({"certify-surface", corpus("triangle.crn"), (dir / "flipped.json").string(), "--epsilon", "0.5"}).code == 1);
}

TEST_CASE("cli simulate and csv output")
{
    auto r = run({"simulate", corpus("reversible_ab.crn"), "--x0", "2,1", "--horizon", "1", "--sample-dt", "0.5",
                  "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t,x1,x2\n", 0) == 0);
    auto p = run({"persist", corpus("triangle.crn"), "--trials", "2", "--format", "csv"});
    CHECK(p.code == 0);
    CHECK(std::count(p.out.begin(), p.out.end(), '\n') == 3);
    CHECK(run({"simulate", corpus("reversible_ab.crn"), "--x0", "2"}).code == 2);
}
