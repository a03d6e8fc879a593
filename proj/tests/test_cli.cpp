#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "io.hpp"

using namespace ocrs;
using ocrs::io::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
};

CliRun ocrs_cli(const std::string& args) {
    std::string cmd = std::string(OCRS_CLI_PATH) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, {}};
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("ocrs_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

}  // namespace

TEST(Io, InstanceRoundTrip) {
    FamilyParams fp;
    fp.n = 3;
    fp.m = 3;
    fp.density = 0.7;
    fp.seed = 2;
    fp.menu_size = 2;
    fp.patience = 2;
    fp.one_sided = true;
    GeneratedInstance g = generate_family(Family::random_bipartite, fp);
    json j = io::instance_to_json(g.instance, g.x);
    GeneratedInstance back = io::instance_from_json(json::parse(j.dump()));
    EXPECT_EQ(io::instance_to_json(back.instance, back.x), j);
    EXPECT_EQ(back.instance.mode, Mode::bipartite_one_sided_patience);
}

TEST(Io, RejectsBadInstances) {
    EXPECT_THROW(io::instance_from_json(json::array()), InputError);
    json j = {{"mode", "general"}, {"vertices", {{{"id", 1}}, {{"id", 2}}}}, {"edges", json::array()}};
    EXPECT_NO_THROW(io::instance_from_json(j));
    j["edges"] = {{{"id", 0}, {"u", 1}, {"v", 3}, {"menu", json::array()}}};
    EXPECT_THROW(io::instance_from_json(j), InputError);
    j["edges"] = {{{"id", 0}, {"u", 1}, {"v", 2}, {"menu", {{{"w", 0.0}, {"p", 2.0}}}}}};
    EXPECT_THROW(io::instance_from_json(j), InputError);
    j["mode"] = "hexagonal";
    EXPECT_THROW(io::instance_from_json(j), InputError);
}

TEST(Io, PointRoundTripByEntryAndWeight) {
    FamilyParams fp;
    fp.eps = 0.1;
    PricingInstance g = generate_family(Family::d1, fp).instance;
    FractionalPoint p{{{0.25, 0.75}}, 1.5};
    json j = io::point_to_json(p, g);
    FractionalPoint back = io::point_from_json(j, g);
    EXPECT_EQ(back.y, p.y);
    for (json& t : j["point"]) t.erase("entry");
    EXPECT_EQ(io::point_from_json(j, g).y, p.y);
    j["point"][0]["weight"] = 7.0;
    EXPECT_THROW(io::point_from_json(j, g), InputError);
}

TEST(Io, ReportCsvShape) {
    SimulationReport r;
    r.edges.resize(2);
    r.edges[1].id = 9;
    std::string csv = io::report_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "edge_id,x_e,freq,ci_lo,ci_hi,freq_r0,freq_r1,ratio,cond,cond_half,cond_r0,cond_r1");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_NE(csv.find("\n9,"), std::string::npos);
}

TEST_F(Cli, GenLpSimulatePipeline) {
    ASSERT_EQ(ocrs_cli("gen --family random-bipartite --n 3 --m 3 --density 0.8 --seed 4 --menu-size 2 --out " +
                       path("inst.json"))
                  .code,
              0);
    CliRun lp = ocrs_cli("lp --instance " + path("inst.json") + " --reduce two-weight --out " + path("point.json"));
    ASSERT_EQ(lp.code, 0);
    EXPECT_NE(lp.out.find("two-weight objective"), std::string::npos);
    json point = io::read_json_file(path("point.json"));
    EXPECT_TRUE(point.contains("point"));

    CliRun sim = ocrs_cli("simulate --instance " + path("inst.json") + " --scheme pricing --attenuation a2 --alpha 0.171" +
                       " --point " + path("point.json") + " --trials 5000 --out " + path("run.csv"));
    ASSERT_EQ(sim.code, 0);
    json summary = io::read_json_file(path("run.json"));
    EXPECT_EQ(summary["trials"], 5000);
    EXPECT_EQ(summary["matching_violations"], 0);
    EXPECT_GT(summary["revenue_mean"].get<double>(), 0.0);
}

TEST_F(Cli, SimulationIsByteIdenticalAcrossWorkerCounts) {
    ASSERT_EQ(ocrs_cli("gen --family random-general --n 5 --density 0.7 --seed 3 --out " + path("g.json")).code, 0);
    for (const char* w : {"1", "4"})
        ASSERT_EQ(ocrs_cli("simulate --instance " + path("g.json") + " --attenuation a2 --alpha 0.171 --trials 9000" +
                           " --seed 5 --workers " + w + " --out " + path(std::string("w") + w + ".csv"))
                      .code,
                  0);
    EXPECT_EQ(slurp(dir / "w1.csv"), slurp(dir / "w4.csv"));
    EXPECT_FALSE(slurp(dir / "w1.csv").empty());
}

TEST_F(Cli, SingleTrialRuns) {
    ASSERT_EQ(ocrs_cli("gen --family star --k 3 --out " + path("s.json")).code, 0);
    for (const char* scheme : {"ro-ocrs", "vertex", "stochastic"})
        EXPECT_EQ(ocrs_cli("simulate --instance " + path("s.json") + " --scheme " + scheme + " --trials 1").code, 0)
            << scheme;
}

TEST_F(Cli, BoundsAndFacts) {
    CliRun b = ocrs_cli("bounds --setting bipartite --grid 21 --out " + path("cert.json"));
    ASSERT_EQ(b.code, 0);
    json cert = io::read_json_file(path("cert.json"));
    EXPECT_GE(cert["minimum"].get<double>(), 0.456 - 0.002);
    EXPECT_EQ(cert["setting"], "bipartite");

    CliRun f = ocrs_cli("verify-facts --out " + path("facts.csv"));
    EXPECT_EQ(f.code, 0);
    std::string csv = slurp(dir / "facts.csv");
    EXPECT_EQ(csv.rfind("fact_id,holds,margin\n", 0), 0u);
    EXPECT_EQ(csv.find(",false,"), std::string::npos);
}

TEST_F(Cli, ErrorsMapToExitCodes) {
    EXPECT_EQ(ocrs_cli("gen --family hexagon").code, 2);
    EXPECT_EQ(ocrs_cli("simulate --instance " + path("missing.json")).code, 2);
    {
        std::ofstream bad(path("bad.json"));
        bad << "{\"mode\": \"general\", \"vertices\": [{\"id\": 1}], \"edges\": [{\"id\": 0, \"u\": 1, \"v\": 1, "
               "\"menu\": []}]}";
    }
    EXPECT_EQ(ocrs_cli("lp --instance " + path("bad.json")).code, 2);
    EXPECT_EQ(ocrs_cli("bounds --alpha 0.9").code, 2);
    EXPECT_NE(ocrs_cli("simulate --instance x --trials 0").code, 0);
}
