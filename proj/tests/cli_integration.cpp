// End-to-end checks of the command-line tool: spawns the real binary and
// inspects exit codes and output files.
//
// usage: cli_integration <path-to-cli> <path-to-health.csv>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "mwca/analysis.hpp"
#include "mwca/contingency.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

#define REQUIRE(cond, msg)                                              \
    do {                                                                \
        if (cond) {                                                     \
            std::printf("ok   %s\n", msg);                              \
        } else {                                                        \
            std::printf("FAIL %s (%s:%d)\n", msg, __FILE__, __LINE__);  \
            ++g_failures;                                               \
        }                                                               \
    } while (0)

std::string g_cli;
fs::path g_scratch;

int run_cmd(const std::string& args, std::string* out = nullptr) {
    const fs::path out_file = g_scratch / "stdout.txt";
    const std::string cmd = "\"" + g_cli + "\" " + args + " > " +
                            out_file.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (out) {
        std::ifstream in(out_file);
        std::stringstream ss;
        ss << in.rdbuf();
        *out = ss.str();
    }
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[entry.path().filename().string()] = ss.str();
    }
    return files;
}

json load_report(const fs::path& dir) {
    std::ifstream in(dir / "report.json");
    json j;
    in >> j;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <cli> <health.csv>\n", argv[0]);
        return 2;
    }
    g_cli = argv[1];
    const std::string health = argv[2];
    g_scratch = fs::temp_directory_path() / "mwca_cli_tests";
    fs::remove_all(g_scratch);
    fs::create_directories(g_scratch);

    {
        const fs::path d1 = g_scratch / "run1";
        const fs::path d2 = g_scratch / "run2";
        REQUIRE(run_cmd("mwca --input " + health + " --ranks full --plot"
                        " --out " + d1.string()) == 0,
                "mwca subcommand succeeds on the bundled table");
        REQUIRE(run_cmd("mwca --input " + health + " --ranks full --plot"
                        " --out " + d2.string()) == 0,
                "mwca subcommand succeeds again");
        REQUIRE(read_dir(d1) == read_dir(d2),
                "identical flags produce byte-identical outputs");
        REQUIRE(fs::exists(d1 / "biplot.svg"), "--plot emits biplot.svg");
        REQUIRE(fs::exists(d1 / "mode-age-Y.csv") &&
                    fs::exists(d1 / "mode-age-W.csv") &&
                    fs::exists(d1 / "mode-age-Z.csv") &&
                    fs::exists(d1 / "sigma-health.csv"),
                "per-mode coordinate and sigma files exist");

        const json rep = load_report(d1);
        const double e = rep["relative_error"]["value"].get<double>();
        REQUIRE(std::abs(e - 0.035) < 0.005,
                "mwca report carries the CA comparison error near 0.035");
        REQUIRE(rep["table"]["grand_total"].get<long long>() == 6371,
                "report echoes the grand total of the table");
    }

    {
        const fs::path d = g_scratch / "compare";
        REQUIRE(run_cmd("compare --input " + health + " --mode 3 --out " +
                        d.string()) == 0,
                "compare subcommand succeeds");
        const json rep = load_report(d);
        REQUIRE(std::abs(rep["relative_error"]["value"].get<double>() -
                         0.035) < 0.005,
                "compare reports the mode-3 relative error near 0.035");
        REQUIRE(fs::exists(d / "ca-mode-health-Y.csv") &&
                    fs::exists(d / "mode-health-Y.csv"),
                "compare writes both coordinate sets");
    }

    {
        std::string out;
        REQUIRE(run_cmd("ca --mode 99 --input " + health + " --out " +
                        (g_scratch / "bad").string(), &out) == 1,
                "ca with an out-of-range mode exits 1");
        REQUIRE(out.find("out of range") != std::string::npos,
                "the error names the range problem");
    }

    {
        std::string out;
        REQUIRE(run_cmd("verify --random 3 4x5x6 --seed 7 --out " +
                        (g_scratch / "ver1").string(), &out) == 0,
                "verify --random exits 0 on exact identities");
        REQUIRE(out.find("FAIL") == std::string::npos,
                "no failing checks on random data");
        run_cmd("verify --random 3 4x5x6 --seed 7 --out " +
                (g_scratch / "ver2").string());
        REQUIRE(read_dir(g_scratch / "ver1") == read_dir(g_scratch / "ver2"),
                "seeded verification is reproducible");
    }

    {
        // report.json residuals come from the library verifiers unchanged
        const fs::path d = g_scratch / "verify_table";
        REQUIRE(run_cmd("verify --input " + health + " --out " + d.string())
                    == 0,
                "verify --input exits 0 on the bundled table");
        const json rep = load_report(d);

        const auto table =
            mwca::load_table(health, mwca::TableFormat::long_csv);
        const auto res = mwca::run_mwca(table.counts);
        bool match = true;
        for (const auto& check : rep["checks"]) {
            if (check["check"] != "barycentric") continue;
            const auto lib = mwca::verify_barycentric(
                res, check["mode"].get<mwca::Index>());
            match = match &&
                    check["max_abs_residual"].get<double>() ==
                        lib.max_abs_residual &&
                    check["relative_residual"].get<double>() ==
                        lib.relative_residual;
        }
        REQUIRE(match, "reported residuals equal the library values exactly");
    }

    {
        std::ofstream csv(g_scratch / "dup.csv");
        csv << "a,b,count\nx,u,1\nx,u,2\n";
        csv.close();
        std::string out;
        REQUIRE(run_cmd("mwca --input " + (g_scratch / "dup.csv").string() +
                        " --out " + (g_scratch / "dupout").string(), &out)
                    == 1,
                "duplicate cells exit 1");
        REQUIRE(out.find("duplicates cell") != std::string::npos,
                "the duplicate cell is named");
    }

    {
        std::ofstream csv(g_scratch / "zrow.csv");
        csv << "g,a,count\nM,young,3\nF,young,1\nM,old,0\nF,old,2\n"
               "M,mid,0\nF,mid,0\n";
        csv.close();
        const std::string in = (g_scratch / "zrow.csv").string();
        REQUIRE(run_cmd("mwca --input " + in + " --out " +
                        (g_scratch / "z1").string()) == 1,
                "zero slices error out by default");
        std::string out;
        REQUIRE(run_cmd("mwca --input " + in + " --zero-slices drop --out " +
                        (g_scratch / "z2").string(), &out) == 0,
                "--zero-slices drop recovers");
        const json rep = load_report(g_scratch / "z2");
        REQUIRE(rep["table"]["dropped_slices"]["a"][0] == "mid",
                "dropped labels are reported");
    }

    {
        std::string out;
        REQUIRE(run_cmd("verify --input " + health + " --ranks 2,4,3", &out)
                    == 0,
                "truncated verification substitutes the reconstruction");
        REQUIRE(out.find("rank-r reconstruction") != std::string::npos,
                "the report says which tensor was decomposed");
        REQUIRE(out.find("SKIP") != std::string::npos &&
                    out.find("full multilinear rank") != std::string::npos,
                "the barycentric check is skipped under truncation");
    }

    {
        // dense-json input produces the same analysis as the csv
        const fs::path jpath = g_scratch / "health.json";
        const auto table =
            mwca::load_table(health, mwca::TableFormat::long_csv);
        mwca::save_table(table, jpath.string(),
                         mwca::TableFormat::dense_json);
        const fs::path dj = g_scratch / "fromjson";
        REQUIRE(run_cmd("mwca --input " + jpath.string() +
                        " --format dense-json --out " + dj.string()) == 0,
                "dense-json input loads through the cli");
        const fs::path dc = g_scratch / "fromcsv";
        run_cmd("mwca --input " + health + " --out " + dc.string());
        json a = load_report(dj), b = load_report(dc);
        a["config"].erase("input");
        b["config"].erase("input");
        REQUIRE(a == b,
                "both formats produce the same report up to the input path");
    }

    {
        REQUIRE(run_cmd("mwca --input missing.csv --out " +
                        (g_scratch / "m").string()) == 1,
                "a missing input file exits 1");
        REQUIRE(run_cmd("") == 1, "no subcommand exits 1");
    }

    std::printf("%s\n", g_failures == 0 ? "cli integration: all ok"
                                        : "cli integration: FAILURES");
    return g_failures == 0 ? 0 : 1;
}
