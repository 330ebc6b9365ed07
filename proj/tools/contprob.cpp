// Command-line front end: analyze / simulate / sweep over a flat-key JSON
// config. Exit status: 0 pass, 1 tolerance failure, 2 config error, 3 I/O.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "contprob/config.hpp"
#include "contprob/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    bool quiet = false;
    std::optional<std::uint64_t> seed_override;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "path to JSON config")->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--format", opts.format, "table format")
        ->check(CLI::IsMember({"csv", "json-lines"}));
    cmd->add_option("--seed-override", opts.seed_override,
                    "replace the config's seed list with this single seed");
    cmd->add_flag("--quiet", opts.quiet, "suppress stdout report");
}

int dispatch(const CommonOpts& opts,
             int (*fn)(const contprob::RunConfig&, const std::filesystem::path&,
                       contprob::OutputFormat, bool)) {
    try {
        contprob::RunConfig cfg = contprob::load_config(opts.config_path);
        if (opts.seed_override) cfg.seeds = {*opts.seed_override};
        const auto format = opts.format == "csv" ? contprob::OutputFormat::csv
                                                 : contprob::OutputFormat::json_lines;
        return fn(cfg, opts.out_dir, format, opts.quiet);
    } catch (const contprob::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return contprob::exit_io_error;
    } catch (const contprob::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return contprob::exit_config_error;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contextual-probability interference simulator"};
    app.require_subcommand(1);

    CommonOpts analyze_opts, simulate_opts, sweep_opts;
    CLI::App* analyze = app.add_subcommand("analyze", "closed-form interference report");
    add_common(analyze, analyze_opts);
    CLI::App* simulate =
        app.add_subcommand("simulate", "seeded runs with convergence traces");
    add_common(simulate, simulate_opts);
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep table");
    add_common(sweep, sweep_opts);

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return dispatch(analyze_opts, contprob::cmd_analyze);
    if (simulate->parsed()) return dispatch(simulate_opts, contprob::cmd_simulate);
    return dispatch(sweep_opts, contprob::cmd_sweep);
}
