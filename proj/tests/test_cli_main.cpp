// End-to-end checks of the command line surface: exit codes, file outputs,
// and the golden fit/apply equality through real files.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "[PASS] " << what << "\n";
    } else {
        ++failures;
        std::cout << "[FAIL] " << what << "\n";
    }
}

int run(const std::string& cmd) {
    int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main() {
    const std::string bin = TABTREE_BIN;
    fs::path dir = fs::temp_directory_path() / "tabtree_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    // A small mixed table with a label column and a missing cell.
    std::string train_csv =
        "num,cat,target\n"
        "1.5,red,1\n"
        "2.5,blue,0\n"
        ",red,1\n"
        "4.5,green,0\n"
        "5.5,red,1\n"
        "6.5,blue,0\n"
        "7.5,red,1\n"
        "8.5,green,0\n";
    {
        std::ofstream out(dir / "train.csv", std::ios::binary);
        out << train_csv;
    }
    {
        std::ofstream out(dir / "config.json", std::ios::binary);
        out << R"({"pipeline": {"labels_column": "target", "shuffletrain": false}})";
    }

    std::string fit_cmd = bin + " --quiet fit " + (dir / "train.csv").string() + " --config " +
                          (dir / "config.json").string() + " --out-dir " + (dir / "out").string();
    check(run(fit_cmd) == 0, "fit exits zero");
    check(fs::exists(dir / "out/train_out.csv"), "fit writes train_out.csv");
    check(fs::exists(dir / "out/labels_out.csv"), "fit writes labels_out.csv");
    check(fs::exists(dir / "out/pipeline.json"), "fit writes pipeline.json");

    std::string apply_cmd = bin + " --quiet apply " + (dir / "out/pipeline.json").string() + " " +
                            (dir / "train.csv").string() + " --out-dir " +
                            (dir / "apply_out").string();
    check(run(apply_cmd) == 0, "apply exits zero");
    check(slurp(dir / "apply_out/test_out.csv") == slurp(dir / "out/train_out.csv"),
          "apply on the fit data reproduces byte-identical CSV output");

    std::string augment_cmd = bin + " --quiet apply " + (dir / "out/pipeline.json").string() +
                              " " + (dir / "train.csv").string() + " --noise-augment 1" +
                              " --out-dir " + (dir / "aug_out").string();
    check(run(augment_cmd) == 0, "apply --noise-augment exits zero");
    {
        std::string base = slurp(dir / "apply_out/test_out.csv");
        std::string doubled = slurp(dir / "aug_out/test_out.csv");
        auto lines = [](const std::string& s) {
            return std::count(s.begin(), s.end(), '\n');
        };
        check(lines(doubled) - 1 == 2 * (lines(base) - 1),
              "noise-augment 1 doubles the output rows");
    }

    std::string invert_cmd = bin + " --quiet invert " + (dir / "out/pipeline.json").string() +
                             " " + (dir / "out/labels_out.csv").string() +
                             " --target labels --out-dir " + (dir / "inv_out").string();
    check(run(invert_cmd) == 0, "invert exits zero");
    {
        std::string recovered = slurp(dir / "inv_out/recovered.csv");
        check(recovered.rfind("target", 0) == 0, "invert writes the source header");
        check(recovered.find("1") != std::string::npos, "invert recovers label values");
        check(fs::exists(dir / "inv_out/inversion_info.csv"), "invert writes the info report");
    }

    std::string report_cmd =
        bin + " report " + (dir / "out/pipeline.json").string() + " > " +
        (dir / "report.txt").string();
    check(run(report_cmd) == 0, "report exits zero");
    check(slurp(dir / "report.txt").find("continuous") != std::string::npos,
          "report prints columntype classes");

    // Errors land on stderr with a nonzero exit code.
    check(run(bin + " --quiet fit " + (dir / "missing.csv").string() + " 2>/dev/null") != 0,
          "missing input file fails with nonzero exit");
    check(run(bin + " --quiet apply " + (dir / "out/pipeline.json").string() + " " +
              (dir / "out/labels_out.csv").string() + " 2>/dev/null") != 0,
          "apply without the source columns fails");

    // Seed plumbing: explicit flag and environment fallback.
    check(run(bin + " --seed 7 --quiet fit " + (dir / "train.csv").string() + " --config " +
              (dir / "config.json").string() + " --out-dir " + (dir / "seed_out").string()) == 0,
          "fit with --seed exits zero");
    check(run("TABTREE_SEED=7 " + bin + " --quiet fit " + (dir / "train.csv").string() +
              " --out-dir " + (dir / "env_out").string()) == 0,
          "fit with TABTREE_SEED exits zero");

    // Bench smoke at tiny scale.
    check(run(bin + " --quiet bench --rows 400 --reps 1 --fractions 1.0 --out " +
              (dir / "bench.csv").string()) == 0,
          "bench exits zero");
    check(slurp(dir / "bench.csv").rfind("scenario,", 0) == 0, "bench writes a results CSV");

    if (failures == 0) {
        std::cout << "all cli checks passed\n";
        return 0;
    }
    std::cout << failures << " cli checks failed\n";
    return 1;
}
