#include <doctest.h>

#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli_app.hpp"
#include "commands.hpp"
#include "mladlasso/csv.hpp"
#include "mladlasso/lad_solver.hpp"
#include "test_helpers.hpp"

using namespace mladlasso;
namespace fs = std::filesystem;

namespace {

struct Run
{
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "mladlasso");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes Y.csv and X.csv (no intercept column) for a small sparse problem.
struct Data
{
    Matrix y;
    Matrix x;
    std::string y_path;
    std::string x_path;
};

Data write_data(const fs::path& dir)
{
    std::mt19937_64 rng(307);
    Data d;
    d.x = testing::gaussian(rng, 40, 4);
    Matrix b = Matrix::Zero(4, 2);
    b.row(0) << 2.0, -1.0;
    d.y = d.x * b + testing::gaussian(rng, 40, 2, 0.3);
    d.y_path = (dir / "Y.csv").string();
    d.x_path = (dir / "X.csv").string();
    io::write_matrix_csv(d.y_path, d.y);
    io::write_matrix_csv(d.x_path, d.x);
    return d;
}

nlohmann::json diagnostics(const fs::path& dir)
{
    return nlohmann::json::parse(slurp(dir / "diagnostics.json"));
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("plain LAD fit writes the solver output")
    {
        testing::TempDir dir("cli-fit");
        const Data d = write_data(dir.path());
        const fs::path out = dir.path() / "out";
        const Run r = run({"fit", "--y", d.y_path, "--x", d.x_path, "--add-intercept", "--lambda",
                           "0", "--no-adaptive", "--out", out.string()});
        REQUIRE(r.code == cli::kExitOk);

        Matrix design(40, 5);
        design.col(0).setOnes();
        design.rightCols(4) = d.x;
        const Matrix expected = solve_lad(d.y, design).coefficients.values();
        std::ifstream coef(out / "coefficients.csv");
        std::string header;
        std::getline(coef, header);
        CHECK(header == "y1,y2");
        const Matrix written = io::parse_matrix_csv(coef, "coefficients.csv");
        CHECK(written.rows() == 5);
        CHECK((written - expected).cwiseAbs().maxCoeff() <= 1e-12);

        const nlohmann::json diag = diagnostics(out);
        CHECK(diag["intercept_added"] == true);
        CHECK(diag["adaptive"] == false);
        CHECK(diag["lambda"] == 0.0);
        CHECK(diag["outer_iterations"] == 0);

        const std::string support = slurp(out / "support.csv");
        CHECK(support.rfind("column,norm\n1,", 0) == 0);
    }

    TEST_CASE("adaptive fit runs the full pipeline")
    {
        testing::TempDir dir("cli-adaptive");
        const Data d = write_data(dir.path());
        const fs::path out = dir.path() / "out";
        const Run r = run({"fit", "--y", d.y_path, "--x", d.x_path, "--add-intercept",
                           "--grid-size", "8", "--seed", "4", "--out", out.string()});
        REQUIRE(r.code == cli::kExitOk);
        const nlohmann::json diag = diagnostics(out);
        CHECK(diag["adaptive"] == true);
        CHECK(diag["initial_lambda_grid"].size() == 8);
        CHECK(diag["adaptive_lambda_grid"].size() == 8);
        CHECK(diag["steps"].size() == diag["outer_iterations"].get<std::size_t>() + 1);
        CHECK(diag["steps"][0]["cv_mean_scores"].size() == 8);
        const std::string support = slurp(out / "support.csv");
        CHECK(support.find("\n2,") != std::string::npos);
    }

    TEST_CASE("missing intercept without --add-intercept is bad input")
    {
        testing::TempDir dir("cli-intercept");
        const Data d = write_data(dir.path());
        const Run r = run({"fit", "--y", d.y_path, "--x", d.x_path, "--lambda", "0.1",
                           "--out", (dir.path() / "out").string()});
        CHECK(r.code == cli::kExitBadInput);
        CHECK(r.err.find("intercept") != std::string::npos);
    }

    TEST_CASE("malformed input names file and line")
    {
        testing::TempDir dir("cli-malformed");
        const Data d = write_data(dir.path());
        const std::string broken = (dir.path() / "broken.csv").string();
        std::ofstream(broken) << "1,2\n3,oops\n";
        const Run r = run({"fit", "--y", broken, "--x", d.x_path, "--add-intercept"});
        CHECK(r.code == cli::kExitBadInput);
        CHECK(r.err.find(broken + ":2") != std::string::npos);

        const Run rows = run({"fit", "--y", d.y_path, "--x", broken, "--add-intercept"});
        CHECK(rows.code == cli::kExitBadInput);
    }

    TEST_CASE("strict mode turns non-convergence into exit 3")
    {
        testing::TempDir dir("cli-strict");
        const Data d = write_data(dir.path());
        const std::vector<std::string> base{"fit", "--y", d.y_path, "--x", d.x_path,
                                            "--add-intercept", "--lambda", "0.01",
                                            "--no-adaptive", "--max-iter", "1", "--out",
                                            (dir.path() / "out").string()};
        CHECK(run(base).code == cli::kExitOk);
        std::vector<std::string> strict = base;
        strict.push_back("--strict");
        CHECK(run(strict).code == cli::kExitNotConverged);
    }

    TEST_CASE("config file values yield to command-line flags")
    {
        testing::TempDir dir("cli-config");
        const Data d = write_data(dir.path());
        const fs::path config = dir.path() / "fit.conf";
        std::ofstream(config) << "y=" << d.y_path << "\nx=" << d.x_path
                              << "\nadd-intercept=true\nlambda=0.3\nadaptive=false\n";
        const fs::path out1 = dir.path() / "a";
        REQUIRE(run({"fit", "--config", config.string(), "--out", out1.string()}).code ==
                cli::kExitOk);
        CHECK(diagnostics(out1)["lambda"] == 0.3);
        CHECK(diagnostics(out1)["adaptive"] == false);

        const fs::path out2 = dir.path() / "b";
        REQUIRE(run({"fit", "--config", config.string(), "--lambda", "0.1", "--out",
                     out2.string()})
                    .code == cli::kExitOk);
        CHECK(diagnostics(out2)["lambda"] == 0.1);

        const fs::path unknown = dir.path() / "unknown.conf";
        std::ofstream(unknown) << "lambad=0.3\n";
        CHECK(run({"fit", "--config", unknown.string(), "--y", d.y_path, "--x", d.x_path})
                  .code == cli::kExitBadInput);
    }

    TEST_CASE("simulate rejects unknown scenarios")
    {
        const Run r = run({"simulate", "--scenario", "bogus"});
        CHECK(r.code == cli::kExitBadInput);
        CHECK(r.err.find("bogus") != std::string::npos);
    }

    TEST_CASE("simulate is byte-for-byte reproducible")
    {
        testing::TempDir dir("cli-simulate");
        const std::vector<std::string> base{"simulate", "--scenario", "zeros", "--replicates",
                                            "1", "--seed", "7", "--grid-size", "3",
                                            "--max-outer", "1"};
        std::vector<std::string> first = base;
        first.insert(first.end(), {"--out", (dir.path() / "a").string()});
        std::vector<std::string> second = base;
        second.insert(second.end(), {"--out", (dir.path() / "b").string()});
        REQUIRE(run(first).code == cli::kExitOk);
        REQUIRE(run(second).code == cli::kExitOk);
        for (const char* name : {"metrics.csv", "aggregate.csv"}) {
            const std::string a = slurp(dir.path() / "a" / name);
            CHECK_FALSE(a.empty());
            CHECK(a == slurp(dir.path() / "b" / name));
        }
        std::istringstream metrics(slurp(dir.path() / "a" / "metrics.csv"));
        std::string header;
        std::getline(metrics, header);
        CHECK(header == "scenario_id,method,replicate,metric_name,value");
        std::size_t zero_rows = 0;
        for (std::string line; std::getline(metrics, line);) {
            zero_rows += line.find(",pct_correct_zeros,") != std::string::npos ? 1 : 0;
        }
        CHECK(zero_rows == 16 * 2);
    }

    TEST_CASE("reproduce selects criteria and reports one line each")
    {
        CHECK(run({"reproduce", "--only", "nonsense"}).code == cli::kExitBadInput);
        const Run r = run({"reproduce", "--only", "augmentation_identity"});
        CHECK(r.code == cli::kExitOk);
        CHECK(r.out.find("[PASS] C1") != std::string::npos);
        CHECK(r.out.find("1/1 criteria passed") != std::string::npos);
    }

    TEST_CASE("usage errors exit 2 and help exits 0")
    {
        CHECK(run({}).code == cli::kExitBadInput);
        CHECK(run({"fit"}).code == cli::kExitBadInput);
        CHECK(run({"fit", "--y", "a", "--x", "b", "--lambda", "abc"}).code == cli::kExitBadInput);
        CHECK(run({"--help"}).code == cli::kExitOk);
    }
}
