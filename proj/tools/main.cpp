#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"
#include "cqa/core.hpp"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kGuard = 3 };

bool output_dir_exists(const std::string& output) {
    if (output == "-") return true;
    const std::filesystem::path path(output);
    return std::filesystem::is_directory(path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

int emit(const cqa::cli::RunConfig& cfg, const cqa::cli::Table& table) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (cfg.output != "-") {
        file.open(cfg.output);
        if (!file) {
            std::cerr << "error: cannot open " << cfg.output << '\n';
            return kInvalid;
        }
        out = &file;
    }
    if (cfg.format == cqa::cli::Format::Csv)
        cqa::cli::write_csv(*out, cfg, table);
    else
        cqa::cli::write_json(*out, cfg, table);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace cqa::cli;
    CLI::App app{"Steady states of the driven-dissipative charging-energy pairing chain"};
    app.set_version_flag("--version", std::string(CQA_FERMI_VERSION) + " (" + CQA_FERMI_GIT_HASH + ")");
    app.require_subcommand(1);

    std::string output = "-", format = "csv";
    int jobs = default_jobs();
    std::map<std::string, std::map<std::string, std::string>> values;

    for (const auto& spec : command_specs()) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.summary);
        sub->footer("Columns: " + spec.columns);
        auto& store = values[spec.name];
        for (const auto& f : spec.flags) {
            store[f.name] = f.fallback;
            sub->add_option("--" + f.name, store[f.name], f.help)->capture_default_str();
        }
        sub->add_option("-o,--output", output, "output file, - for stdout")->capture_default_str();
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        sub->add_option("--jobs", jobs, "worker threads (default from CQA_FERMI_JOBS)")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    RunConfig cfg;
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.args = values[cfg.command];
    cfg.output = output;
    cfg.format = parse_format(format);
    cfg.jobs = jobs;

    if (!output_dir_exists(cfg.output)) {
        std::cerr << "error: output directory does not exist for " << cfg.output << '\n';
        return kInvalid;
    }
    try {
        const CommandResult res = run_command(cfg);
        const int written = emit(cfg, res.table);
        if (written != kOk) return written;
        return res.verified ? kOk : kVerifyFailed;
    } catch (const cqa::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_numerical_guard() ? kGuard : kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kGuard;
    }
}
