#include <CLI11.hpp>

#include "lognewton/runconfig.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ground states of the planar log-convolution equation"};
    app.require_subcommand(1);

    std::string solve_config;
    auto* solve = app.add_subcommand(
        "solve", "run a ground-state solve from a config file");
    solve->add_option("config", solve_config, "config file")->required();

    std::string verify_dir;
    auto* verify = app.add_subcommand(
        "verify", "recompute and check a saved result directory");
    verify->add_option("dir", verify_dir, "result directory")->required();

    std::string sweep_config;
    auto* sweep = app.add_subcommand(
        "sweep", "run a grid/seed sweep and write a CSV table");
    sweep->add_option("config", sweep_config, "sweep config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (solve->parsed()) return lognewton::run_solve(solve_config);
    if (verify->parsed()) return lognewton::run_verify(verify_dir);
    if (sweep->parsed()) return lognewton::run_sweep(sweep_config);
    return 1;
}
