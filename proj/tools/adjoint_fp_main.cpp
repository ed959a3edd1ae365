#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "adjoint_fp/config.hpp"
#include "adjoint_fp/run.hpp"

int main(int argc, char** argv) {
    using namespace adjoint_fp;

    CLI::App app{"Monotone HJ / adjoint Fokker-Planck solver"};
    app.require_subcommand(1, 1);
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    for (const char* name : {"fp", "mfg", "hughes", "validate", "eikonal"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides [run] output_dir)");
        sub->add_option("--seed", seed, "particle seed (overrides [run] seed)");
    }
    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    const Command command = *parse_command(name);
    RunConfig cfg;
    try {
        cfg = load_config(config_path, command);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (app.get_subcommands().front()->count("--seed")) cfg.seed = seed;
    } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return exit_code_for(e);
    }
    return run(cfg, std::cout, std::cerr);
}
