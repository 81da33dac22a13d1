#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tabtree/bench.hpp"
#include "tabtree/config.hpp"
#include "tabtree/csv.hpp"
#include "tabtree/inversion.hpp"
#include "tabtree/pipeline.hpp"
#include "tabtree/store.hpp"
#include "tabtree/tree_engine.hpp"

namespace fs = std::filesystem;
using namespace tabtree;

namespace {

std::uint64_t seed_fallback() {
    if (const char* env = std::getenv("TABTREE_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 42;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

void print_warnings(const std::vector<std::string>& warnings, bool quiet) {
    if (quiet) return;
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

PipelineStore load_store(const std::string& path) {
    return deserialize_pipeline(read_file(path));
}

int run_fit(const std::string& train_path, const std::string& config_path,
            const std::string& out_dir, std::uint64_t seed, bool seed_given, bool quiet) {
    ConfigFile config;
    if (!config_path.empty()) {
        config = load_config(config_path, builtin_registry());
    }
    if (seed_given || config_path.empty()) config.pipeline.master_seed = seed;
    print_warnings(config.warnings, quiet);

    Registry registry = registry_with_extensions(builtin_registry(), config.extensions);
    Table train = read_csv(train_path);
    FitResult result = fit(train, config.pipeline, registry);
    print_warnings(result.warnings, quiet);

    fs::create_directories(out_dir);
    write_csv(result.train, (fs::path(out_dir) / "train_out.csv").string());
    if (!result.labels.columns.empty()) {
        write_csv(result.labels, (fs::path(out_dir) / "labels_out.csv").string());
    }
    if (!result.validation.columns.empty() && result.validation.row_count() > 0) {
        write_csv(result.validation, (fs::path(out_dir) / "val_out.csv").string());
        if (!result.validation_labels.columns.empty()) {
            write_csv(result.validation_labels,
                      (fs::path(out_dir) / "val_labels_out.csv").string());
        }
    }
    write_file((fs::path(out_dir) / "pipeline.json").string(),
               serialize_pipeline(result.store));
    if (!quiet) {
        std::cout << "fit: " << result.train.columns.size() << " returned columns, "
                  << result.train.row_count() << " rows -> " << out_dir << "\n";
    }
    return 0;
}

int run_apply(const std::string& store_path, const std::string& test_path,
              const std::string& out_dir, bool traindata, int noise_augment, bool quiet) {
    PipelineStore store = load_store(store_path);
    Table test = read_csv(test_path);
    ApplyResult result = apply(store, test, traindata, noise_augment);
    print_warnings(result.warnings, quiet);

    fs::create_directories(out_dir);
    write_csv(result.test, (fs::path(out_dir) / "test_out.csv").string());
    if (!result.labels.columns.empty()) {
        write_csv(result.labels, (fs::path(out_dir) / "test_labels_out.csv").string());
    }
    if (!quiet) {
        std::cout << "apply: " << result.test.columns.size() << " columns, "
                  << result.test.row_count() << " rows -> " << out_dir << "\n";
    }
    return 0;
}

int run_invert(const std::string& store_path, const std::string& data_path,
               const std::string& target, const std::string& out_dir, bool quiet) {
    PipelineStore store = load_store(store_path);
    Table data = read_csv(data_path);
    InvertTarget t = target == "labels" ? InvertTarget::labels : InvertTarget::test;
    InvertResult result = invert(store, data, t);

    fs::create_directories(out_dir);
    write_csv(result.recovered, (fs::path(out_dir) / "recovered.csv").string());

    std::string info = "source,recovered,full_information,path\n";
    for (const auto& entry : result.report) {
        std::string path;
        for (const auto& step : entry.path) {
            if (!path.empty()) path += " <- ";
            path += step;
        }
        info += entry.source_header + "," + (entry.recovered ? "yes" : "no") + "," +
                (entry.full_information ? "yes" : "no") + "," + path;
        if (!entry.note.empty()) info += " (" + entry.note + ")";
        info += "\n";
    }
    write_file((fs::path(out_dir) / "inversion_info.csv").string(), info);
    if (!quiet) {
        std::cout << "invert: recovered " << result.recovered_list.size() << " columns -> "
                  << out_dir << "\n";
        for (const auto& entry : result.report) {
            if (!entry.full_information && entry.recovered) {
                std::cout << "  note: '" << entry.source_header
                          << "' recovered via an approximate (non full-information) path\n";
            }
        }
    }
    return 0;
}

int run_report(const std::string& store_path) {
    PipelineStore store = load_store(store_path);
    ColumntypeReport report = columntype_report(store);
    std::cout << "columntype report\n";
    for (const auto& [cls, headers] : report.classes) {
        std::cout << "  " << cls << ":";
        for (const auto& h : headers) std::cout << " " << h;
        std::cout << "\n";
    }
    for (const auto& [cls, groups] : report.sets) {
        std::cout << "  " << cls << ":";
        for (const auto& g : groups) {
            std::cout << " [";
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (i) std::cout << ",";
                std::cout << g[i];
            }
            std::cout << "]";
        }
        std::cout << "\n";
    }
    std::cout << "\nfitted columns\n";
    auto print_source = [](const SourceColumnRecord& s) {
        std::cout << "  " << s.header << " (root " << s.root_id << ", infill "
                  << infill_strategy_name(s.strategy) << ")\n";
        for (const auto& b : s.bases) {
            std::cout << "    " << b.returned_header << "  category=" << b.category_id
                      << " generation=" << b.generation << (b.retained ? " retained" : "")
                      << (b.column_count > 1 ? " columns=" + std::to_string(b.column_count) : "")
                      << "\n";
        }
    };
    for (const auto& s : store.sources) print_source(s);
    if (store.labels) {
        std::cout << "  labels:\n";
        print_source(*store.labels);
    }
    return 0;
}

int run_bench(std::size_t rows, const std::vector<double>& fractions, int reps,
              std::uint64_t seed, const std::string& out_path, const std::string& learner,
              bool quiet) {
    bench::ScenarioOptions options;
    options.rows = rows;
    if (!fractions.empty()) options.fractions = fractions;
    options.repetitions = reps;
    options.seed = seed;
    options.learner = learner == "svc" ? bench::Learner::svc : bench::Learner::logreg;
    auto results = bench::run_scenarios(options);
    if (!quiet) std::cout << bench::results_text(results);
    if (!out_path.empty()) write_file(out_path, bench::results_csv(results));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tabtree: family-tree feature transformations for tabular data"};
    app.require_subcommand(1);

    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress progress and warning output");

    std::uint64_t seed = seed_fallback();
    bool seed_given = false;
    app.add_option("--seed", seed, "master random seed (fallback: TABTREE_SEED, then 42)")
        ->each([&](const std::string&) { seed_given = true; });

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a pipeline on a train CSV");
    std::string train_path, config_path, out_dir = ".";
    fit_cmd->add_option("train", train_path, "train CSV path")->required();
    fit_cmd->add_option("--config", config_path, "JSON configuration file");
    fit_cmd->add_option("--out-dir", out_dir, "output directory");

    // apply
    auto* apply_cmd = app.add_subcommand("apply", "apply a fitted pipeline to a test CSV");
    std::string store_path, test_path;
    bool traindata = false;
    int noise_augment = 0;
    apply_cmd->add_option("pipeline", store_path, "pipeline.json path")->required();
    apply_cmd->add_option("test", test_path, "test CSV path")->required();
    apply_cmd->add_flag("--traindata", traindata,
                        "treat the data as train data (noise categories inject)");
    apply_cmd->add_option("--noise-augment", noise_augment,
                          "emit one clean plus N noise-injected copies");
    apply_cmd->add_option("--out-dir", out_dir, "output directory");

    // invert
    auto* invert_cmd = app.add_subcommand("invert", "recover source form from returned columns");
    std::string data_path, target = "test";
    invert_cmd->add_option("pipeline", store_path, "pipeline.json path")->required();
    invert_cmd->add_option("data", data_path, "CSV of returned columns or predictions")
        ->required();
    invert_cmd->add_option("--target", target, "labels|test")
        ->check(CLI::IsMember({"labels", "test"}));
    invert_cmd->add_option("--out-dir", out_dir, "output directory");

    // report
    auto* report_cmd = app.add_subcommand("report", "print the columntype report");
    report_cmd->add_option("pipeline", store_path, "pipeline.json path")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run the preprocessing scenario benchmark");
    std::size_t rows = 10000;
    std::vector<double> fractions;
    int reps = 5;
    std::string bench_out, learner = "logreg";
    bench_cmd->add_option("--rows", rows, "synthetic dataset rows");
    bench_cmd->add_option("--fractions", fractions, "train subset fractions");
    bench_cmd->add_option("--reps", reps, "repetitions per scenario");
    bench_cmd->add_option("--out", bench_out, "write results CSV here");
    bench_cmd->add_option("--learner", learner, "logreg (AUC) or svc (accuracy)")
        ->check(CLI::IsMember({"logreg", "svc"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit_cmd->parsed()) {
            return run_fit(train_path, config_path, out_dir, seed, seed_given, quiet);
        }
        if (apply_cmd->parsed()) {
            return run_apply(store_path, test_path, out_dir, traindata, noise_augment, quiet);
        }
        if (invert_cmd->parsed()) {
            return run_invert(store_path, data_path, target, out_dir, quiet);
        }
        if (report_cmd->parsed()) {
            return run_report(store_path);
        }
        if (bench_cmd->parsed()) {
            return run_bench(rows, fractions, reps, seed, bench_out, learner, quiet);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
