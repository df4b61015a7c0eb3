#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sptetris/cli.hpp"
#include "sptetris/formats.hpp"

#include <sys/wait.h>

using namespace sptetris;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "sptetris");
    std::vector<const char *> argv;
    for (const auto & a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
  public:
    TempDir()
    {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("sptetris-test-" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string write(const std::string & name, const std::string & text) const
    {
        std::ofstream(path_ / name) << text;
        return (path_ / name).string();
    }
    std::string path(const std::string & name) const { return (path_ / name).string(); }

  private:
    fs::path path_;
};

std::string slurp(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char * kSix = R"({"dim": 4, "eigenvalues": ["15", "4", "1", "4"], "norms_squared": ["9", "4", "3", "3", "1", "4"]})";
const char * kFailing = R"({"dim": 2, "eigenvalues": ["5", "2"], "norms_squared": ["3", "3", "1"]})";
const char * kThirteen = R"({"dim": 3, "eigenvalues": ["13/3", "13/3", "13/3"], "norms_squared": ["4", "4", "4", "1"]})";
const char * kSeven = R"({"dim": 3, "eigenvalues": ["22/3", "22/3", "22/3"], "norms_squared": ["7", "7", "6", "1", "1"]})";

} // namespace

TEST_CASE("construct writes the matrix file")
{
    TempDir dir;
    const std::string spec = dir.write("six.json", kSix);
    const Run r = run({"construct", spec, "-o", dir.path("m.json"), "--float-csv", dir.path("m.csv")});
    REQUIRE(r.code == kExitOk);

    const LoadedMatrix m = matrix_from_json(read_json_file(dir.path("m.json")));
    CHECK(m.matrix.entries().size() == 8);
    CHECK(m.matrix.at(1, 3) == RadicalScalar(-1, Rational(2)));
    CHECK(m.matrix.block_log().size() == 5);

    const std::string csv = slurp(dir.path("m.csv"));
    CHECK(csv.substr(0, csv.find('\n')) == "3,2,1,1,0,0");
    CHECK(csv.find("1.4142135623730951,-1.4142135623730951") != std::string::npos);
    std::istringstream in(csv);
    const DenseMatrix dense = read_csv(in);
    CHECK(dense.rows == 4);
    CHECK(dense.cols == 6);

    const std::string text = slurp(dir.path("m.json"));
    CHECK(text.find("\r") == std::string::npos);
    CHECK(text.find("\"generator\"") != std::string::npos);
}

TEST_CASE("construct reports the violated condition")
{
    TempDir dir;
    const Run r = run({"construct", dir.write("f.json", kFailing)});
    CHECK(r.code == kExitInfeasible);
    CHECK(r.err.find("k=1") != std::string::npos);
    CHECK(r.err.find("condition (ii)") != std::string::npos);

    const Run skipped = run({"construct", dir.path("f.json"), "--skip-check"});
    CHECK(skipped.code == kExitInfeasible);
    CHECK(skipped.err.find("BlockInfeasible") != std::string::npos);
}

TEST_CASE("construct accepts unit and decimal norms")
{
    TempDir dir;
    const Run unit = run({"construct", dir.write("u.json", R"({"dim": 2, "eigenvalues": ["2", "2"], "unit": true})")});
    CHECK(unit.code == kExitOk);
    CHECK(matrix_from_json(nlohmann::json::parse(unit.out)).matrix.count() == 4);

    const Run dec = run({"construct", dir.write("d.json", R"({"dim": 2, "eigenvalues": ["2", "5"],
                                                             "norms": ["1.7320508", "1.7320508", "1"]})")});
    CHECK(dec.code == kExitOk);
    CHECK(dec.err.find("warning") != std::string::npos);

    CHECK(run({"construct", dir.write("bad.json",
                                      R"({"dim": 2, "eigenvalues": ["2", "2"], "unit": true, "norms_squared": ["4"]})")})
              .code == kExitUsage);
    CHECK(run({"construct", dir.write("odd.json", R"({"dim": 1, "eigenvalues": ["3/2"], "unit": true})")}).code
          == kExitUsage);
}

TEST_CASE("check")
{
    TempDir dir;
    const Run six = run({"check", dir.write("six.json", kSix)});
    CHECK(six.code == kExitOk);
    CHECK(six.out.find("forced partition: 2 4 5 6") != std::string::npos);

    const Run thirteen = run({"check", dir.write("t.json", kThirteen), "--json"});
    CHECK(thirteen.code == kExitInfeasible);
    const auto j = nlohmann::json::parse(thirteen.out);
    CHECK(j["ready"] == false);
    CHECK(j["violation"]["condition"] == "GapII");

    const Run mismatch =
        run({"check", dir.write("m.json", R"({"dim": 1, "eigenvalues": ["2"], "norms_squared": ["1"]})")});
    CHECK(mismatch.code == kExitUsage);
    CHECK(mismatch.err.find("TraceMismatch") != std::string::npos);

    CHECK(run({"check", dir.write("junk.json", "{not json")}).code == kExitUsage);
    CHECK(run({"check", dir.path("missing.json")}).code == kExitUsage);
}

TEST_CASE("search")
{
    TempDir dir;
    const Run none = run({"search", dir.write("t.json", kThirteen)});
    CHECK(none.code == kExitInfeasible);
    const auto j = nlohmann::json::parse(none.out);
    CHECK(j["orderings"].empty());
    CHECK(j["exhausted"] == true);

    const Run seven = run({"search", dir.write("s.json", kSeven), "--max-results", "100", "--threads", "2"});
    CHECK(seven.code == kExitOk);
    bool found = false;
    const auto seven_json = nlohmann::json::parse(seven.out);
    for (const auto & o : seven_json["orderings"])
        found |= o["norms_squared"] == nlohmann::json::array({"7", "6", "1", "1", "7"});
    CHECK(found);

    const Run big = run({"search",
                         dir.write("big.json", R"({"dim": 6, "eigenvalues": ["220", "220", "221", "6", "4", "2"],
                             "norms_squared": ["210", "210", "180", "30", "30", "4", "4", "4", "1"]})"),
                         "--budget", "1"});
    CHECK(big.code == kExitBudget);
    CHECK(big.err.find("BudgetExhausted") != std::string::npos);
}

TEST_CASE("verify")
{
    TempDir dir;
    const std::string spec = dir.write("six.json", kSix);
    REQUIRE(run({"construct", spec, "-o", dir.path("m.json"), "--float-csv", dir.path("m.csv")}).code == kExitOk);

    const Run exact = run({"verify", dir.path("m.json")});
    CHECK(exact.code == kExitOk);
    CHECK(nlohmann::json::parse(exact.out)["matchesSpec"] == true);

    const Run fl = run({"verify", dir.path("m.json"), "--spec", spec, "--mode", "float", "--tol", "1e-9"});
    CHECK(fl.code == kExitOk);
    CHECK(nlohmann::json::parse(fl.out)["mode"] == "float");

    const Run csv = run({"verify", dir.path("m.csv"), "--spec", spec});
    CHECK(csv.code == kExitOk);
    CHECK(nlohmann::json::parse(csv.out)["matchesSpec"] == true);

    const Run other = run({"verify", dir.path("m.json"), "--spec", dir.write("f.json", kFailing)});
    CHECK(other.code == kExitUsage); // 2x3 spec against a 4x6 matrix

    const Run wrong = run({"verify", dir.path("m.json"), "--spec",
                           dir.write("w.json", R"({"dim": 4, "eigenvalues": ["15", "4", "4", "1"],
                               "norms_squared": ["9", "4", "3", "3", "1", "4"]})")});
    CHECK(wrong.code == kExitInfeasible);
    CHECK(nlohmann::json::parse(wrong.out)["matchesSpec"] == false);

    CHECK(run({"verify", dir.path("m.json"), "--mode", "fuzzy"}).code == kExitUsage);
}

TEST_CASE("feasible")
{
    const Run twelve = run({"feasible", "--vectors", "12", "--dim", "8"});
    CHECK(twelve.code == kExitOk);
    CHECK(twelve.out.find("L = 2") != std::string::npos);

    const Run thirteen = run({"feasible", "--vectors", "13", "--dim", "8", "--json"});
    CHECK(thirteen.code == kExitInfeasible);
    CHECK(nlohmann::json::parse(thirteen.out)["failingK"] == 2);

    const Run sixteen = run({"feasible", "-M", "16", "-N", "8"});
    CHECK(sixteen.code == kExitOk);
    CHECK(sixteen.out.find(">= 2") != std::string::npos);

    CHECK(run({"feasible", "-M", "3", "-N", "4"}).code == kExitUsage);
    CHECK(run({"feasible", "-M", "3"}).code == kExitUsage);
}

TEST_CASE("equal-norm")
{
    const Run three = run({"equal-norm", "--eigenvalues", "3,2,1"});
    CHECK(three.code == kExitOk);
    const LoadedMatrix m = matrix_from_json(nlohmann::json::parse(three.out));
    CHECK(m.matrix.count() == 16);
    CHECK(three.err.find("r = 4") != std::string::npos);

    CHECK(run({"equal-norm", "--eigenvalues", "2,2"}).err.find("r = 3") != std::string::npos);
    CHECK(run({"equal-norm", "--eigenvalues", "3,2,1", "--r", "5"}).err.find("25 vectors") != std::string::npos);
    const Run one = run({"equal-norm", "--eigenvalues", "5"});
    CHECK(one.code == kExitInfeasible);
    CHECK(one.err.find("DegenerateSpectrum") != std::string::npos);
    CHECK(run({"equal-norm", "--eigenvalues", "1,2"}).code == kExitUsage);
}

TEST_CASE("usage errors")
{
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("factor bound from the environment")
{
    TempDir dir;
    REQUIRE(run({"construct", dir.write("six.json", kSix), "-o", dir.path("m.json")}).code == kExitOk);
    ::setenv("ST_FACTOR_BOUND", "1", 1);
    CHECK(run({"verify", dir.path("m.json")}).code == kExitUsage);
    ::setenv("ST_FACTOR_BOUND", "50", 1);
    CHECK(run({"verify", dir.path("m.json")}).code == kExitOk);
    ::unsetenv("ST_FACTOR_BOUND");
}

TEST_CASE("property: output is byte-identical and the pipeline verifies")
{
    TempDir dir;
    std::mt19937_64 rng(71);
    for (int i = 0; i < 100; ++i) {
        const FrameSpec spec = oracle::random_ready_spec(rng, 6, 12);
        const std::string path = dir.write("s.json", dump(spec_to_json(spec)));
        const Run a = run({"construct", path, "--reproducible"});
        const Run b = run({"construct", path, "--reproducible"});
        REQUIRE(a.code == kExitOk);
        REQUIRE(a.out == b.out);
        REQUIRE(a.out.find("generator") == std::string::npos);

        std::ofstream(dir.path("m.json"), std::ios::binary) << a.out;
        const Run v = run({"verify", dir.path("m.json"), "--spec", path});
        REQUIRE(v.code == kExitOk);
        REQUIRE(nlohmann::json::parse(v.out)["matchesSpec"] == true);
    }
}

TEST_CASE("the installed executable honours the exit-code contract")
{
    TempDir dir;
    const std::string exe = SPTETRIS_EXE;
    auto status = [](const std::string & cmd) {
        const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status(exe + " check " + dir.write("six.json", kSix)) == 0);
    CHECK(status(exe + " construct " + dir.write("f.json", kFailing)) == 2);
    CHECK(status(exe + " check " + dir.path("nope.json")) == 1);
    CHECK(status(exe + " feasible -M 13 -N 8") == 2);
}
