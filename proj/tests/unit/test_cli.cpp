#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gridexp/cli.hpp"
#include "gridexp/protocols.hpp"
#include "gridexp/trace.hpp"

using namespace gridexp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "gridexp-cli-tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("run exit codes") {
    auto ok = cli({"run", "--grid", "2x3", "--protocol", "grid23", "--k", "3", "--seed", "4"});
    CHECK(ok.code == kOk);
    CHECK(ok.out.rfind("explored:", 0) == 0);

    CHECK(cli({"run", "--grid", "2x2", "--protocol", "stay", "--k", "4"}).code == kOk);
    CHECK(cli({"run", "--grid", "3x4", "--protocol", "general3", "--k", "3", "--model", "corda", "--seed", "9"}).code ==
          kOk);

    auto unsupported = cli({"run", "--grid", "3x3", "--protocol", "five33", "--k", "3"});
    CHECK(unsupported.code == kUsage);
    CHECK(unsupported.err.find("unsupported") != std::string::npos);
    CHECK(cli({"run", "--grid", "2x2", "--protocol", "general3", "--k", "3"}).code == kUsage);
    CHECK(cli({"run", "--grid", "3x", "--protocol", "grid23", "--k", "3"}).code == kUsage);
    CHECK(cli({"run", "--grid", "2x3", "--protocol", "nope", "--k", "3"}).code == kUsage);
    CHECK(cli({"run", "--grid", "2x3", "--protocol", "grid23", "--k", "3", "--initial", "0,0;1,0"}).code == kUsage);
    CHECK(cli({"run", "--grid", "2x3", "--protocol", "grid23", "--k", "3", "--initial", "0,0:2;1,0"}).code == kUsage);
    CHECK(cli({"run", "--grid", "2x3", "--protocol", "grid23", "--k", "3", "--initial", "9,9;1,0;0,1"}).code == kUsage);
    CHECK(cli({"run", "--grid", "2x3", "--protocol", "grid23", "--k", "3", "--adversary", "psychic"}).code == kUsage);
    CHECK(cli({"run", "--grid", "2x3", "--protocol", "grid23", "--k", "3", "--model", "fsync"}).code == kUsage);
    CHECK(cli({"run", "--grid", "2x3"}).code == kUsage);
    CHECK(cli({"bogus"}).code == kUsage);
    CHECK(cli({}).code == kUsage);

    // The broken explorer misses nodes under some schedule.
    bool failed = false;
    for (int seed = 0; seed < 20 && !failed; ++seed) {
        auto r = cli({"run", "--grid", "1x6", "--protocol", "general3-reversed", "--k", "3", "--seed",
                      std::to_string(seed), "--max-steps", "500"});
        CHECK(r.code != kUsage);
        failed = r.code == kFailed;
    }
    CHECK(failed);
}

TEST_CASE("run writes a trace that replays") {
    auto path = scratch("run.ndjson");
    auto r = cli({"run", "--grid", "3x4", "--protocol", "general3", "--k", "3", "--model", "corda", "--seed", "12",
                  "--trace", path.string()});
    REQUIRE(r.code == kOk);
    std::ifstream in(path);
    auto t = read_trace(in);
    CHECK(t.header.seed == 12U);
    CHECK(t.header.protocol == "general3");
    CHECK(replay_matches(Engine(find_protocol("general3").fn), t));
    CHECK(t.events.back().quiescent);

    // The trace is itself a valid script and reproduces itself.
    auto again = scratch("again.ndjson");
    auto s = cli({"run", "--grid", "3x4", "--protocol", "general3", "--k", "3", "--model", "corda", "--seed", "12",
                  "--adversary", "script:" + path.string(), "--trace", again.string()});
    CHECK(s.code == kOk);
    CHECK(slurp(again) == slurp(path));
}

TEST_CASE("verify exit codes") {
    auto pass = cli({"verify", "--grid", "2x3", "--protocol", "grid23", "--k", "3", "--model", "corda"});
    CHECK(pass.code == kOk);
    CHECK(pass.out.rfind("pass", 0) == 0);

    auto cx_path = scratch("cx.ndjson");
    auto report_path = scratch("report.json");
    auto fail = cli({"verify", "--grid", "1x5", "--protocol", "general3-reversed", "--k", "3", "--trace",
                     cx_path.string(), "--report", report_path.string()});
    CHECK(fail.code == kFailed);
    CHECK(fail.out.find("trace: " + cx_path.string()) != std::string::npos);
    std::ifstream in(cx_path);
    auto t = read_trace(in);
    CHECK(replay_matches(Engine(find_protocol("general3-reversed").fn), t));
    auto report = Json::parse(slurp(report_path));
    CHECK(report["verdict"] == "counterexample");

    CHECK(cli({"verify", "--grid", "2x4", "--protocol", "general3", "--k", "3", "--budget", "5"}).code == kInconclusive);
    CHECK(cli({"verify", "--grid", "2x4", "--protocol", "general3", "--k", "3", "--no-canonicalize", "--jobs", "2"})
              .code == kOk);
    CHECK(cli({"verify", "--grid", "3x3", "--protocol", "grid23", "--k", "3"}).code == kUsage);
}

TEST_CASE("oracle subcommands") {
    auto cert = scratch("tw.json");
    auto tw = cli({"oracle", "tower-walk", "--out", cert.string()});
    CHECK(tw.code == kOk);
    auto golden = Json::parse(slurp(fs::path(GRIDEXP_SOURCE_DIR) / "certificates" / "tower-walk.json"));
    CHECK(Json::parse(slurp(cert)) == golden);

    auto ft = cli({"oracle", "full-tower", "--k", "3"});
    CHECK(ft.code == kOk);
    CHECK(Json::parse(ft.out)["bound"] == 1);
    CHECK(cli({"oracle", "full-tower", "--k", "1"}).code == kUsage);

    auto imp = cli({"oracle", "impossibility", "--grid", "2x2", "--k", "2"});
    CHECK(imp.code == kOk);
    CHECK(Json::parse(imp.out)["verdict"] == "no protocol");
    auto capped = cli({"oracle", "impossibility", "--grid", "4x4", "--k", "3"});
    CHECK(capped.code == kInconclusive);
    CHECK(capped.err.find("refused") != std::string::npos);
    CHECK(cli({"oracle"}).code == kUsage);
}

TEST_CASE("the installed binary reports the same exit codes") {
    std::string exe = GRIDEXP_CLI;
    auto code = [&](const std::string& args) {
        int status = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(code("run --grid 2x3 --protocol grid23 --k 3") == 0);
    CHECK(code("run --grid 3x3 --protocol five33 --k 4") == 2);
    CHECK(code("verify --grid 1x4 --protocol general3 --k 3") == 0);
    CHECK(code("oracle impossibility --grid 4x4 --k 3") == 3);
}
