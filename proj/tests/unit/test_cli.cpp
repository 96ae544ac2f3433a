#include <doctest.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "couplemap/cli.hpp"
#include "couplemap/report_io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = couplemap::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Two overlapping daily price series.
void write_prices(const testing::TempDir& dir) {
    std::ofstream a(dir / "a.csv");
    std::ofstream b(dir / "b.csv");
    a << "date,value\n";
    b << "date,value\n";
    double pa = 100, pb = 50;
    for (int d = 0; d < 300; ++d) {
        pa *= 1.0 + 0.01 * std::sin(d * 0.7) + 0.002 * ((d * 37) % 11 - 5);
        pb *= 1.0 + 0.01 * std::cos(d * 1.3) + 0.003 * ((d * 17) % 7 - 3);
        const auto date = couplemap::format_iso_date(18000 + d);
        if (d % 13 != 0) a << date << ',' << pa << '\n';
        if (d % 17 != 0) b << date << ',' << pb << '\n';
    }
    std::ofstream c(dir / "c.csv");
    c << "date,value\n1990-01-01,1\n1990-01-02,2\n1990-01-03,3\n";
}

}  // namespace

TEST_CASE("map writes four files") {
    testing::TempDir dir;
    write_prices(dir);
    const auto out = (dir / "map").string();
    const auto r = run({"map", "--x", (dir / "a.csv").string(), "--y", (dir / "b.csv").string(), "--bins", "10",
                        "--out", out});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    for (auto name : {"adjacency.tsv", "edges.csv", "joint_probability.tsv", "report.json"}) {
        CHECK(fs::exists(fs::path(out) / name));
        CHECK(r.out.find(name) != std::string::npos);
    }
    const auto report = couplemap::load_report(fs::path(out) / "report.json");
    CHECK(report.bin_count == 10);

    const auto raw = run({"map", "--x", (dir / "a.csv").string(), "--y", (dir / "b.csv").string(), "--bins", "10",
                          "--preprocess", "raw", "--out", (dir / "raw").string()});
    CHECK(raw.code == 0);
    CHECK(couplemap::load_report(dir / "raw" / "report.json").sample_count ==
          report.sample_count + 1);
}

TEST_CASE("map errors are single-line Kind:detail") {
    testing::TempDir dir;
    write_prices(dir);
    const auto missing = (dir / "nope.csv").string();
    auto r = run({"map", "--x", missing, "--y", (dir / "b.csv").string(), "--out", (dir / "o").string()});
    CHECK(r.code == 1);
    CHECK(r.err == "IoError:" + missing + "\n");

    r = run({"map", "--x", (dir / "a.csv").string(), "--y", (dir / "c.csv").string(), "--out", (dir / "o").string()});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("EmptyIntersection"));
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

    r = run({"map", "--x", (dir / "a.csv").string(), "--y", (dir / "b.csv").string(), "--bins", "2"});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("InvalidArgument:"));

    r = run({"map", "--x", (dir / "a.csv").string()});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("InvalidArgument:"));
}

TEST_CASE("map-lag") {
    testing::TempDir dir;
    write_prices(dir);
    auto r = run({"map-lag", "--input", (dir / "a.csv").string(), "--lag", "2", "--bins", "8", "--out",
                  (dir / "lag").string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "lag" / "edges.csv"));
    r = run({"map-lag", "--input", (dir / "c.csv").string(), "--lag", "5", "--preprocess", "raw", "--bins", "3"});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("LagTooLarge"));
}

TEST_CASE("baseline is reproducible and validates") {
    testing::TempDir dir;
    const std::vector<std::string> common{"baseline", "--hurst", "0.3,0.5", "--replicas", "3", "--length", "300",
                                          "--bins", "12", "--seed", "9"};
    auto args = common;
    args.insert(args.end(), {"--out", (dir / "b1").string()});
    CHECK(run(args).code == 0);
    args = common;
    args.insert(args.end(), {"--out", (dir / "b2").string()});
    CHECK(run(args).code == 0);
    const auto csv = slurp(dir / "b1" / "baseline_summary.csv");
    CHECK(csv == slurp(dir / "b2" / "baseline_summary.csv"));
    CHECK(slurp(dir / "b1" / "baseline.json") == slurp(dir / "b2" / "baseline.json"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 21);
    CHECK(csv.find("fGn(H=0.3),deformation_R,") != std::string::npos);

    const auto json = couplemap::Json::parse(slurp(dir / "b1" / "baseline.json"));
    CHECK(json.size() == 2);
    CHECK(json[1]["hurst"] == 0.5);

    auto r = run({"baseline", "--replicas", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("TooFewSamples"));
    r = run({"baseline", "--hurst", "1.5", "--replicas", "2", "--length", "100"});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("InvalidArgument"));
    r = run({"baseline", "--mode", "sideways"});
    CHECK(r.code == 1);
}

TEST_CASE("surrogate and compare") {
    testing::TempDir dir;
    write_prices(dir);
    const auto a = (dir / "a.csv").string();
    const auto b = (dir / "b.csv").string();
    CHECK(run({"map", "--x", a, "--y", b, "--bins", "10", "--out", (dir / "ab").string()}).code == 0);
    CHECK(run({"map", "--x", b, "--y", a, "--bins", "10", "--out", (dir / "ba").string()}).code == 0);
    auto r = run({"surrogate", "--x", a, "--y", b, "--bins", "10", "--replicas", "4", "--out", (dir / "s").string()});
    CHECK(r.code == 0);
    CHECK(slurp(dir / "s" / "surrogate_summary.csv").find("surrogate(a-b),") != std::string::npos);
    CHECK(run({"baseline", "--hurst", "0.5,0.7", "--replicas", "3", "--length", "200", "--bins", "10", "--out",
               (dir / "base").string()})
              .code == 0);

    r = run({"compare", "--report", "AB=" + (dir / "ab" / "report.json").string(), "--report",
             (dir / "ba" / "report.json").string(), "--baseline", (dir / "base" / "baseline_summary.csv").string(),
             "--surrogate", (dir / "s" / "surrogate_summary.csv").string(), "--out", (dir / "cmp").string()});
    CHECK(r.code == 0);
    const auto j = couplemap::Json::parse(slurp(dir / "cmp" / "comparison.json"));
    REQUIRE(j["systems"].size() == 5);
    CHECK(j["systems"][0]["name"] == "AB");
    CHECK(j["systems"][1]["name"] == "ba");
    CHECK(j["systems"][2]["name"] == "fGn(H=0.5)");
    CHECK(j["systems"][2]["distance_to_uncoupled"] == 0.0);
    CHECK(j["systems"][0]["normalized"].size() == 21);

    // Baselines alone.
    r = run({"compare", "--baseline", (dir / "base" / "baseline_summary.csv").string(), "--out",
             (dir / "cmp2").string()});
    CHECK(r.code == 0);
    const auto k = couplemap::Json::parse(slurp(dir / "cmp2" / "comparison.json"));
    CHECK(k["systems"][0]["distance_to_uncoupled"] == 0.0);
    CHECK(k["systems"][1]["distance_to_uncoupled"].get<double>() > 0.0);

    // Schema mismatch.
    auto report = couplemap::Json::parse(slurp(dir / "ab" / "report.json"));
    report.erase("assort_coef");
    couplemap::write_text(dir / "broken.json", report.dump());
    r = run({"compare", "--report", (dir / "broken.json").string(), "--baseline",
             (dir / "base" / "baseline_summary.csv").string(), "--out", (dir / "cmp3").string()});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("MismatchedMeasureSets"));

    r = run({"compare", "--report", (dir / "ab" / "report.json").string(), "--report",
             (dir / "ba" / "report.json").string(), "--out", (dir / "cmp4").string()});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("MissingBaseline"));
}

TEST_CASE("help documents preconditions") {
    const auto r = run({"baseline", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find(">= 2") != std::string::npos);
    CHECK(r.out.find("(0, 1)") != std::string::npos);
    const auto m = run({"map", "--help"});
    CHECK(m.out.find("B >= 3") != std::string::npos);
}

TEST_CASE("fetch against a local server") {
    httplib::Server server;
    server.Get("/ok.csv", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("Date,Open,Close\n2020-01-03,1,12.5\n2020-01-02,1,11\n", "text/csv");
    });
    server.Get("/page", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("<!DOCTYPE html><html><body>hello</body></html>", "text/html");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    const std::string base = "http://127.0.0.1:" + std::to_string(port);

    testing::TempDir dir;
    const auto out = (dir / "sub" / "ok.csv").string();
    auto r = run({"fetch", "--url", base + "/ok.csv", "--out", out});
    CHECK(r.code == 0);
    CHECK(slurp(out) == "date,value\n2020-01-02,11\n2020-01-03,12.5\n");

    r = run({"fetch", "--url", base + "/missing.csv", "--out", (dir / "x.csv").string()});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("NetworkError:HTTP 404"));

    r = run({"fetch", "--url", base + "/page", "--out", (dir / "y.csv").string()});
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("ParseError"));
    CHECK_FALSE(fs::exists(dir / "y.csv"));

    server.stop();
    th.join();
}
