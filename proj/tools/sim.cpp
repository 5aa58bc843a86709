// Command-line front end:
//   sim evolve|spectrum|chi|effective|validity|levels [--config FILE] [--out DIR] [--key value ...]
//   sim figure <name> [--out DIR] [--key value ...]
// Errors go to stderr as one JSON object and the exit status is nonzero.

#include "soclattice/config.hpp"
#include "soclattice/errors.hpp"
#include "soclattice/parallel.hpp"
#include "soclattice/runner.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace soclattice;

namespace {

constexpr const char* kUsage =
    "usage: sim evolve|spectrum|chi|effective|validity|levels [--config FILE] [--out DIR] "
    "[--key value ...]\n"
    "       sim figure <name> [--out DIR] [--key value ...]\n";

struct Arguments {
    std::string command;
    std::string figure;
    std::string config_file;
    std::string out_dir;
    std::vector<std::pair<std::string, std::string>> overrides;
};

Arguments parse_arguments(int argc, char** argv) {
    Arguments args;
    if (argc < 2) throw InvalidArgument("missing command");
    args.command = argv[1];
    int i = 2;
    if (args.command == "figure") {
        if (argc < 3) throw InvalidArgument("figure needs a recipe name");
        args.figure = argv[2];
        i = 3;
    }
    for (; i < argc; ++i) {
        std::string flag = argv[i];
        if (flag.rfind("--", 0) != 0) throw InvalidArgument("unexpected argument '" + flag + "'");
        std::string key = flag.substr(2);
        std::string value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= argc) throw InvalidArgument("missing value for " + flag);
            value = argv[++i];
        }
        if (key == "config")
            args.config_file = value;
        else if (key == "out")
            args.out_dir = value;
        else
            args.overrides.emplace_back(key, value);
    }
    return args;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void finish(ExperimentConfig& cfg, const Arguments& args) {
    for (const auto& [key, value] : args.overrides) apply_setting(cfg, key, value, 0);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    validate_config(cfg);
}

int execute(const Arguments& args) {
    const int threads = default_thread_count();
    std::vector<ExperimentConfig> configs;
    if (args.command == "figure") {
        if (!args.config_file.empty())
            throw InvalidArgument("figure recipes do not take --config");
        configs = figure_recipe(args.figure);
    } else {
        ExperimentConfig cfg =
            args.config_file.empty() ? ExperimentConfig{} : parse_config(read_file(args.config_file));
        cfg.run = run_kind_from_string(args.command);
        if (cfg.name == "run") cfg.name = args.command;
        configs.push_back(cfg);
    }
    for (ExperimentConfig& cfg : configs) {
        finish(cfg, args);
        for (const auto& path : run(cfg, threads)) std::cout << path.string() << "\n";
    }
    return 0;
}

void report(const std::string& kind, const std::string& message, int line = -1) {
    nlohmann::json record{{"error", kind}, {"message", message}};
    if (line >= 0) record["line"] = line;
    std::cerr << record.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc >= 2 && (std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h")) {
        std::cout << kUsage;
        return 0;
    }
    try {
        return execute(parse_arguments(argc, argv));
    } catch (const ParseError& e) {
        report(e.kind(), e.what(), e.line());
    } catch (const InvalidArgument& e) {
        report(e.kind(), e.what());
        std::cerr << kUsage;
        return 2;
    } catch (const Error& e) {
        report(e.kind(), e.what());
    } catch (const std::exception& e) {
        report("internal", e.what());
    }
    return 1;
}
