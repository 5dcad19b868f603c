#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wesma/errors.hpp"
#include "wesma/io.hpp"
#include "wesma/pipeline.hpp"

namespace {

constexpr const char* kDescription =
    "Undecimated wavelet denoising and multilingual anomaly scoring pipeline";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{kDescription};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::int64_t> seed_override;
    std::optional<std::string> out_override;

    for (const std::string& name : wesma::command_names()) {
        CLI::App* sub = app.add_subcommand(name, "Run the '" + name + "' stage");
        sub->add_option("--config", config_path, "Run configuration (JSON)")->required();
        sub->add_option("--seed", seed_override, "Override the configured seed");
        sub->add_option("--out", out_override, "Override the configured output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        wesma::RunConfig cfg = wesma::load_run_config(config_path);
        if (seed_override) {
            cfg.seed = static_cast<std::uint64_t>(*seed_override);
        }
        // Output directory precedence: --out flag, then WESMA_OUT, then config.
        if (out_override) {
            cfg.out_dir = *out_override;
        } else if (const char* env_out = std::getenv("WESMA_OUT")) {
            cfg.out_dir = env_out;
        }
        std::cout << wesma::run_command(command, cfg) << "\n";
        return 0;
    } catch (const wesma::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const wesma::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const wesma::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
