#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wesma/datagen.hpp"
#include "wesma/denoise.hpp"
#include "wesma/embed.hpp"

namespace wesma {

// Bad configuration (unknown keys, missing files, out-of-range values);
// mapped to the usage exit status by the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SignalGenConfig {
    std::vector<SignalKind> kinds{SignalKind::blocks, SignalKind::bumps,
                                  SignalKind::doppler, SignalKind::sine};
    std::size_t length = 2048;
    std::optional<double> target_snr_db = 10.5;
};

struct DecomposeConfig {
    std::string input;
    std::string filter = "db2";
    int levels = 3;
};

struct DenoiseStageConfig {
    std::string input;
    std::string reference; // optional clean signal for SNR accounting
    DenoiseConfig denoise;
};

struct EvalDenoiseLanguage {
    std::string lang;
    double initial_snr_db = 10.5;
};

struct EvalDenoiseConfig {
    std::vector<EvalDenoiseLanguage> languages{
        {"en", 10.5}, {"hi", 9.8}, {"ta", 11.2}, {"fr", 10.9}};
    SignalKind signal = SignalKind::blocks;
    std::size_t length = 2048;
    std::size_t seeds = 20;
    DenoiseConfig denoise;
};

struct TextprepConfig {
    std::string profiles_dir = "profiles";
    int min_count = 2;
};

struct TokenSignalConfig {
    std::size_t projections = 3;
    std::size_t target_length = 64;
    int levels = 3;
    std::string filter = "haar";
};

struct WesmaStageConfig {
    int layers = 2;
    double lambda = 1e-3;
    double p0 = 0.3;
    double alpha = 1.0;
    double p_max = 0.9;
    std::string repr_mode = "concat";
    std::vector<std::string> seed_terms; // empty: auto-select by document frequency
    std::size_t auto_seed_count = 10;
    bool fusion = true;
    // Align score scales across languages: robust z-score of the log
    // reconstruction error against each language's legitimate training docs.
    bool calibrate = true;
    TokenSignalConfig signal;
};

struct EvalConfig {
    std::array<double, 3> ratios{0.6, 0.2, 0.2};
};

// Relative paths in a config resolve against the working directory.
struct RunConfig {
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";

    SignalGenConfig signal_gen;
    std::optional<CorpusSpec> corpus; // languages live here
    std::optional<DecomposeConfig> decompose;
    std::optional<DenoiseStageConfig> denoise_stage;
    EvalDenoiseConfig eval_denoise;
    TextprepConfig textprep;
    CbowConfig cbow;
    WesmaStageConfig wesma;
    EvalConfig eval;
};

// Parses and validates; unknown keys are rejected, referenced files must
// exist for the command being run.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const nlohmann::json& j);

// Validates command-specific inputs (paths, required sections).
void validate_for_command(const RunConfig& cfg, const std::string& command);

// Executes one subcommand and returns its one-line summary.
std::string run_command(const std::string& command, const RunConfig& cfg);

const std::vector<std::string>& command_names();

} // namespace wesma
