#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "wtail/tail.hpp"
#include "wtail/dataset.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = WTAIL_CLI_PATH;
const std::string kLarynx = std::string(WTAIL_DATA_DIR) + "/larynx.csv";

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const fs::path tmp =
        fs::temp_directory_path() / ("wtail_cli_out_" + std::to_string(rand()));
    const std::string cmd = kCli + " " + args + " > " + tmp.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove(tmp);
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, ss.str()};
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path d = fs::temp_directory_path() / ("wtail_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("cli: fit on the bundled data") {
    const auto d = fresh_dir("fit");
    const auto r = run("fit --input " + kLarynx + " --x 65 --k 54 --alpha 0.05 --out " +
                       d.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n=90") != std::string::npos);
    CHECK(r.output.find("uncensored=50") != std::string::npos);
    CHECK(r.output.find("gamma=0.8") != std::string::npos);
    CHECK(fs::exists(d / "fit.json"));
    const std::string js = file_bytes(d / "fit.json");
    CHECK(js.find("\"h_source\": \"cv\"") != std::string::npos);
    CHECK(js.find("\"gamma_hat\"") != std::string::npos);
}

TEST_CASE("cli: uniform-weights fit stays in the published ballpark") {
    const auto d = fresh_dir("unif");
    const auto r = run("fit --input " + kLarynx +
                       " --uniform-weights --k 37 --alpha 0.05 --out " + d.string());
    CHECK(r.exit_code == 0);
    // parse "q(0.0500)=NN.NNNN" out of the table line
    const auto pos = r.output.find(")=", r.output.find("q(0.05"));
    REQUIRE(pos != std::string::npos);
    const double q = std::stod(r.output.substr(pos + 2));
    CHECK(q >= 18.0);
    CHECK(q <= 26.0);
}

TEST_CASE("cli: exit code families") {
    // missing file -> parse family (2)
    CHECK(run("fit --input /no/such/file.csv --x 65 --k 5").exit_code == 2);
    // bad flags -> config family (3)
    CHECK(run("fit --input " + kLarynx + " --x 65").exit_code == 3);   // no k
    CHECK(run("fit --nonsense").exit_code == 3);
    CHECK(run("simulate --scenario xx --seed 1").exit_code == 3);
    CHECK(run("simulate --scenario eq --seed 1 --reps 0").exit_code == 3);
    CHECK(run("").exit_code == 3);  // a subcommand is required

    // estimation failure -> estimation family (4): all-censored data
    const auto d = fresh_dir("cens");
    {
        std::ofstream f(d / "allcens.csv");
        f << "time,delta,covariate\n";
        for (int i = 1; i <= 20; ++i) {
            f << i << ",0," << (60 + i % 5) << "\n";
        }
    }
    const auto r = run("fit --input " + (d / "allcens.csv").string() +
                       " --x 62 --k 5 --h 100");
    CHECK(r.exit_code == 4);
}

TEST_CASE("cli: simulate determinism, byte for byte, across thread counts") {
    const auto d1 = fresh_dir("sim1");
    const auto d2 = fresh_dir("sim2");
    const auto d3 = fresh_dir("sim3");
    const std::string base =
        " simulate --n 100 --reps 2 --scenario eq --seed 1 --h 0.3 --k 10"
        " --x-grid 0.3,0.5,0.7";
    CHECK(run(base + " --out " + d1.string()).exit_code == 0);
    CHECK(run(base + " --out " + d2.string()).exit_code == 0);
    CHECK(run(base + " --threads 8 --out " + d3.string()).exit_code == 0);
    const auto csv1 = file_bytes(d1 / "mc_report.csv");
    CHECK(!csv1.empty());
    CHECK(csv1 == file_bytes(d2 / "mc_report.csv"));
    CHECK(csv1 == file_bytes(d3 / "mc_report.csv"));
    CHECK(file_bytes(d1 / "mc_report.json") == file_bytes(d2 / "mc_report.json"));
    CHECK(file_bytes(d1 / "mc_report.json") == file_bytes(d3 / "mc_report.json"));
    CHECK(csv1.rfind("scenario,n,x,estimator,truth,mse,mae,mean,reps_used,"
                     "reps_failed\n", 0) == 0);
}

TEST_CASE("cli: qq emission") {
    const auto d = fresh_dir("qq");
    const auto out = (d / "qq.csv").string();
    const auto r =
        run("qq --input " + kLarynx + " --k 54 --out " + out);
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "loglog_n_over_i,log_z");
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 54);

    CHECK(run("qq --input " + kLarynx + " --k 90").exit_code == 4);  // invalid k
}

TEST_CASE("cli: environment variable overrides the default output directory") {
    const auto d = fresh_dir("envdir");
    const std::string cmd = "WTAIL_OUT_DIR=" + d.string() + " " + kCli +
                            " fit --input " + kLarynx +
                            " --uniform-weights --k 37 > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(d / "fit.json"));
}
